"""Numerical kernel backend selection.

Imports the compiled extension when present, otherwise the NumPy fallback.
Set ELASTICAE_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-equivalence tests).
"""

import os

if os.environ.get("ELASTICAE_PURE_PYTHON") == "1":
    from . import _fallback as _impl

    BACKEND = "fallback"
else:
    try:
        from . import _ext as _impl  # type: ignore[attr-defined]

        BACKEND = "ext"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "fallback"

complete_k = _impl.complete_k
complete_e = _impl.complete_e
jacobi_sn_cn_dn = _impl.jacobi_sn_cn_dn
planar_rk4 = _impl.planar_rk4
frenet_rk4 = _impl.frenet_rk4


def available_backends():
    """Name -> module for every importable backend."""
    from . import _fallback

    found = {"fallback": _fallback}
    try:
        from . import _ext  # type: ignore[attr-defined]

        found["ext"] = _ext
    except ImportError:
        pass
    return found
