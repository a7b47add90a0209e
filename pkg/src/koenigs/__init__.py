__all__ = [
    "config",
    "errors",
    "export",
    "green",
    "models",
    "quadrature",
    "quantize",
    "radicals",
    "runner",
    "spaces",
    "special_cases",
    "specfun",
    "validation",
    "verify",
    "wavefun",
]
