"""Exact checks of MacMahon-type identities for right quantum superalgebras
and of higher Sugawara operators for the affine Lie superalgebra gl(m|n)."""
from .core import NCPoly, SuperDim, from_text, superdim, to_text
from .quotient import QuadraticSpec, is_manin, macmahon_report, quotient
from .berezinian import MatrixSeries, Series, berezinian, berezinian_alt, expansion_identities, factorization_check
from .pbw import PBW, hc_project
from .sugawara import SugawaraFamilies, build_T, det_lambda_check, route_a, route_b
from .gaudin import GaudinSystem, commutativity_check

__version__ = "0.1.0"

__all__ = [
    "NCPoly", "SuperDim", "from_text", "superdim", "to_text",
    "QuadraticSpec", "is_manin", "macmahon_report", "quotient",
    "MatrixSeries", "Series", "berezinian", "berezinian_alt", "expansion_identities", "factorization_check",
    "PBW", "hc_project",
    "SugawaraFamilies", "build_T", "det_lambda_check", "route_a", "route_b",
    "GaudinSystem", "commutativity_check",
]
