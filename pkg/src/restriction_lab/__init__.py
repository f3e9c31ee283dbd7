"""Numerical laboratory for sharp adjoint Fourier restriction to the sphere.

Submodules are imported lazily so that the command-line entry point can
configure threading before numpy loads.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "ExponentPair": "exponents",
    "conjugate_exponent": "exponents",
    "scaling_line_q": "exponents",
    "SphereGrid": "grids",
    "UniformGrid": "grids",
    "make_sphere_grid": "grids",
    "make_uniform_grid": "grids",
    "grid_to_json": "grids",
    "grid_from_json": "grids",
    "Cap": "caps",
    "enumerate_caps": "caps",
    "caps_related": "caps",
    "max_resolvable_level": "caps",
    "SphereField": "fields",
    "PlaneField": "fields",
    "SpacetimeField": "fields",
    "lebesgue_norm": "fields",
    "inner_product": "fields",
    "field_to_json": "fields",
    "field_from_json": "fields",
    "extend_sphere": "extend",
    "extend_sphere_at": "extend",
    "extend_parab": "extend",
    "extend_parab_at": "extend",
    "restrict_dual": "extend",
    "modulate": "extend",
    "gaussian_parab_oracle": "extend",
    "ExtensionOperator": "extend",
    "scaling_exponents": "constants",
    "circle_average_phi": "constants",
    "circle_average_phi_endpoint": "constants",
    "alpha": "constants",
    "beta": "constants",
    "AlphaResult": "constants",
    "ProfilePair": "profiles",
    "ConcentrationSchedule": "profiles",
    "conjugate_pair": "profiles",
    "pair_from_fields": "profiles",
    "build_concentrated": "profiles",
    "sphere_parab_residual": "profiles",
    "antipodal_limit_check": "profiles",
    "AntipodalLimitReport": "profiles",
    "Chip": "capdecomp",
    "ChipDecomposition": "capdecomp",
    "chip_decompose": "capdecomp",
    "additivity_residual": "capdecomp",
    "ExtremizerReport": "extremize",
    "power_iterate": "extremize",
    "el_residual": "extremize",
    "pinfty_norm": "extremize",
    "noisy_constant_init": "extremize",
    "truncation_tail_bound": "extremize",
}

__all__ = sorted(_EXPORTS)


def __getattr__(name):
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module 'restriction_lab' has no attribute {name!r}")
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    value = getattr(module, name)
    globals()[name] = value
    return value
