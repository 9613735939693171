"""Binary subspace chirp codebooks and decoders.

Subpackages by layer: gf2 (bit-packed binary linear algebra), symplectic
(Sp(2m;2) and its Bruhat factorization), pauli (Heisenberg-Weyl operators and
stabilizer groups), clifford (factored Clifford actions), codebook (exact
chirp codebooks), decoder (single- and multi-user reconstruction), simulator
(Monte-Carlo channel experiments), cli (command line front end).
"""

from . import _kernels

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Which fast-transform backend was selected at import ('compiled' or 'numpy')."""
    return _kernels.BACKEND
