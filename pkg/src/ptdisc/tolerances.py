"""Central numeric tolerances.

Everything here is an absolute tolerance. The defaults are deliberately
generous multiples of double-precision rounding: every closed form in this
package is a handful of elementary operations, so 1e-10 leaves three orders
of magnitude of headroom while still catching any real formula error.
"""

# Default tolerance for operator identities and closed-form comparisons.
ATOL = 1e-10

# Unit-norm and probability-sum slack.
NORM_ATOL = 1e-12

# States compare equal iff 1 - fidelity is below this.
STATE_FIDELITY_ATOL = 1e-10

# Post-evolution Hermitian orthogonality of the leading pair.
ORTHO_ATOL = 1e-9

# Ensembles must keep every pairwise fidelity below 1 - DISTINCT_FIDELITY.
DISTINCT_FIDELITY = 1e-9

# Amplitude below which the azimuth phi is unphysical and canonicalized to 0.
POLE_EPS = 1e-12
