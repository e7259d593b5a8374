"""Exact geometry of the Arnoux-Yoccoz genus-3 surface and its real-rel family."""

from ayrel.field import ALPHA, NFElem, ONE, ZERO, alpha_power, nf_parse

__all__ = [
    "NFElem", "ALPHA", "ONE", "ZERO", "alpha_power", "nf_parse",
    "build_x0", "build_xr", "vertical_decomposition", "iso_check",
]

__version__ = "0.1.0"


def __getattr__(name):
    # heavier modules load lazily so `import ayrel` stays light
    if name in ("build_x0", "build_xr"):
        from ayrel import family
        return getattr(family, name)
    if name == "vertical_decomposition":
        from ayrel.cylinders import vertical_decomposition
        return vertical_decomposition
    if name == "iso_check":
        from ayrel.canonical import iso_check
        return iso_check
    raise AttributeError(name)
