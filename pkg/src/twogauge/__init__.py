"""Crossed modules, 2-group calculus, and higher parallel transport.

The package splits into an algebraic layer (groups, crossed modules,
2-cells), a differential layer (expressions, algebra-valued forms,
paths and bigons), transport integrators with their law checkers, and
the combinatorial gluing layer (cover nerves, cocycles, classification).
The command-line front end lives in twogauge.cli.
"""

from twogauge.cech import (
    CoverNerve,
    GluingCocycle,
    check_tetrahedron,
    check_triangle,
    check_unit_laws,
    classify_finite,
    coboundary_act,
    nerve,
)
from twogauge.crossed import (
    CrossedModule,
    crossed_module,
    differential_consistency,
    from_tables,
    peiffer_violating_fixture,
    shipped_finite_names,
    shipped_matrix_names,
    validate_crossed_module,
)
from twogauge.errors import (
    BudgetExceeded,
    CompositionError,
    ConfigError,
    EvalError,
    GeometryError,
    GroupDomainError,
    ParseError,
    TwoGaugeError,
)
from twogauge.expr import compile_expr, differentiate, evaluate, parse, to_text
from twogauge.forms import (
    FormField,
    PointwiseForm,
    fake_curvature_form,
    forms_close,
    three_curvature,
)
from twogauge.geometry import (
    Bigon,
    Path,
    Reparam,
    shipped_bigon,
    shipped_path,
)
from twogauge.groups import FiniteGroup, LieAlgebra, MatrixGroup
from twogauge.maps import ExpParamMap, NumericalMap, maurer_cartan
from twogauge.report import Check, ValidationReport
from twogauge.scenario import (
    Scenario,
    load_scenario,
    scenario_from_dict,
    serialize_scenario,
    shipped_scenarios,
)
from twogauge.transport import (
    LocalConnection,
    SurfaceResult,
    check_transition_laws,
    check_transition_laws_plain,
    check_triple_overlap,
    convergence_study,
    fake_flat_connection,
    kernel_check,
    path_holonomy,
    surface_holonomy,
    transform_connection,
)
from twogauge.twocells import TwoCell, check_interchange, eckmann_hilton_probe

__version__ = "0.1.0"

__all__ = [
    "Bigon",
    "BudgetExceeded",
    "Check",
    "CompositionError",
    "ConfigError",
    "CoverNerve",
    "CrossedModule",
    "EvalError",
    "ExpParamMap",
    "FiniteGroup",
    "FormField",
    "GeometryError",
    "GluingCocycle",
    "GroupDomainError",
    "LieAlgebra",
    "LocalConnection",
    "MatrixGroup",
    "NumericalMap",
    "ParseError",
    "Path",
    "PointwiseForm",
    "Reparam",
    "Scenario",
    "SurfaceResult",
    "TwoCell",
    "TwoGaugeError",
    "ValidationReport",
    "check_interchange",
    "check_tetrahedron",
    "check_transition_laws",
    "check_transition_laws_plain",
    "check_triangle",
    "check_triple_overlap",
    "check_unit_laws",
    "classify_finite",
    "coboundary_act",
    "compile_expr",
    "convergence_study",
    "crossed_module",
    "differential_consistency",
    "differentiate",
    "eckmann_hilton_probe",
    "evaluate",
    "fake_curvature_form",
    "fake_flat_connection",
    "forms_close",
    "from_tables",
    "kernel_check",
    "load_scenario",
    "maurer_cartan",
    "nerve",
    "parse",
    "path_holonomy",
    "peiffer_violating_fixture",
    "scenario_from_dict",
    "serialize_scenario",
    "shipped_bigon",
    "shipped_finite_names",
    "shipped_matrix_names",
    "shipped_path",
    "shipped_scenarios",
    "surface_holonomy",
    "three_curvature",
    "to_text",
    "transform_connection",
    "validate_crossed_module",
]
