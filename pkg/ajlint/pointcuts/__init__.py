from ajlint.pointcuts.matcher import JoinPoint, evaluate, evaluate_at, match_signature
from ajlint.pointcuts.shadows import ShadowSet, join_point_shadows, select, shadows_of, universe

__all__ = [
    "JoinPoint", "ShadowSet", "evaluate", "evaluate_at", "join_point_shadows",
    "match_signature", "select", "shadows_of", "universe",
]
