from ._cagvrp import (
    Instance,
    ParseError,
    Solution,
    brute_force,
    euclidean_instance,
    generate_random,
    load_instance,
    load_solution,
    parse_instance,
    parse_solution,
    render_svg,
    save_instance,
    solve,
    validate,
)

__all__ = [
    "Instance",
    "ParseError",
    "Solution",
    "brute_force",
    "euclidean_instance",
    "generate_random",
    "load_instance",
    "load_solution",
    "parse_instance",
    "parse_solution",
    "render_svg",
    "save_instance",
    "solve",
    "validate",
]
