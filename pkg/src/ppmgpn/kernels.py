"""Backend selection for the edit-distance kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded.  :func:`use_backend` switches at runtime (tests and the
benchmark use it to compare both).
"""

from __future__ import annotations

from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _compiled = None

MATCH = _kernels_py.MATCH
SUBSTITUTE = _kernels_py.SUBSTITUTE
DELETE = _kernels_py.DELETE
INSERT = _kernels_py.INSERT

_BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _BACKENDS[BACKEND]

edit_distance = _impl.edit_distance
align_opcodes = _impl.align_opcodes
feature_edit_distance = _impl.feature_edit_distance


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str) -> ModuleType:
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


def use_backend(name: str) -> None:
    """Rebind the module-level kernels to backend ``name``."""
    global BACKEND, _impl, edit_distance, align_opcodes, feature_edit_distance
    _impl = get_backend(name)
    BACKEND = name
    edit_distance = _impl.edit_distance
    align_opcodes = _impl.align_opcodes
    feature_edit_distance = _impl.feature_edit_distance
