"""Field reads/writes and calls to methods outside the advice's reach."""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from ajlint.model.program import FieldDecl, MethodDecl, ProgramModel
from ajlint.pointcuts.shadows import ShadowSet
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span

FieldRef = Tuple[str, str]


def _assignment_targets(body: n.Block) -> Set[n.Node]:
    return {node.target for node in n.walk(body) if isinstance(node, n.Assign)}


def field_access_sites(body: n.Block, model: ProgramModel) -> Iterator[Tuple[str, FieldDecl, Span]]:
    """Yields ("read" | "write", field, span) for every base-class field occurrence."""
    targets = _assignment_targets(body)
    for node in n.walk(body):
        if not isinstance(node, (n.Name, n.FieldAccess)):
            continue
        decl = model.resolve(node)
        if isinstance(decl, FieldDecl) and decl.is_base_field:
            yield ("write" if node in targets else "read"), decl, node.span


def detect_field_access(body: n.Block, model: ProgramModel) -> Tuple[FrozenSet[FieldRef], FrozenSet[FieldRef]]:
    """
    Base-class fields read and written by ``body``.

    Aspect-local state never appears. ``x.f = x.f - 1`` lands in both sets.
    """
    reads: Set[FieldRef] = set()
    writes: Set[FieldRef] = set()
    for mode, decl, _ in field_access_sites(body, model):
        (writes if mode == "write" else reads).add((decl.owner, decl.name))
    return frozenset(reads), frozenset(writes)


def crossing_sites(
    body: n.Block,
    shadows: ShadowSet,
    model: ProgramModel,
    aspect: Optional[str] = None,
) -> Dict[str, List[Span]]:
    sites: Dict[str, List[Span]] = {}
    for node in n.walk(body):
        if not isinstance(node, n.Call):
            continue
        decl = model.resolve(node)
        if not isinstance(decl, MethodDecl) or _is_aspect_member(decl, aspect):
            continue
        if decl.qualified_name in shadows.executions:
            continue
        sites.setdefault(decl.qualified_name, []).append(node.span)
    return sites


def _is_aspect_member(decl: MethodDecl, aspect: Optional[str]) -> bool:
    if decl.owner_is_aspect:
        return True
    if decl.introduced_by is None:
        return False
    return aspect is None or decl.introduced_by == aspect


def detect_crossing(
    body: n.Block,
    shadows: ShadowSet,
    model: ProgramModel,
    aspect: Optional[str] = None,
) -> FrozenSet[str]:
    """
    Declared methods called from ``body`` whose execution the advice does not intercept.

    Intrinsics, ``proceed``, aspect helpers and members introduced by the advice's own
    aspect are not counted.
    """
    return frozenset(crossing_sites(body, shadows, model, aspect))
