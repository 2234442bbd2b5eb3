"""
Canonical forms for finite weighted sums of cells.

A cell is either a ``Ball`` of F or a ``UnitCoset`` of F^x. Both families are trees under
inclusion, so any finite sum of cell indicators has a unique decomposition into maximal
cells of constancy. The routines below compute it in two passes: split every cell that
contains a finer one, then merge complete sibling families with equal coefficients.
"""

from collections import defaultdict
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple, TypeVar

from ..arith import Scalar, is_zero, normalize_scalar
from ..fields import Ball, UnitCoset, unit_residues

Cell = TypeVar("Cell", Ball, UnitCoset)

NUMERIC_ZERO = 1e-14


def coset_parent(cell: UnitCoset) -> Optional[UnitCoset]:
    if cell.level == 0:
        return None
    if cell.level == 1:
        return UnitCoset.shell(cell.valuation, cell.p)
    return UnitCoset(cell.p, cell.valuation, cell.unit_residue % cell.p ** (cell.level - 1), cell.level - 1)


def coset_family_size(parent: UnitCoset) -> int:
    return len(unit_residues(parent.p, 1)) if parent.level == 0 else parent.p


def ball_parent(cell: Ball) -> Ball:
    return Ball.make(cell.center, cell.level - 1, cell.p)


def ball_family_size(parent: Ball) -> int:
    return parent.p


def _same(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, complex) or isinstance(b, complex):
        return abs(complex(a) - complex(b)) <= NUMERIC_ZERO
    return a == b


def _drop(value: Scalar) -> bool:
    return is_zero(value, NUMERIC_ZERO)


def canonicalize(
    terms: Iterable[Tuple[Cell, Scalar]],
    parent: Callable[[Cell], Optional[Cell]],
    family_size: Callable[[Cell], int],
) -> Dict[Cell, Scalar]:
    """
    Return the canonical decomposition of a sum of weighted cells.

    Args:
        terms: Pairs of cell and coefficient; cells may overlap.
        parent: Maps a cell to the next coarser cell, or None at the top.
        family_size: Number of children of a cell.

    Returns:
        Pairwise disjoint maximal cells with non-zero coefficients.
    """
    cells: List[Tuple[Cell, Scalar]] = [(c, normalize_scalar(v)) for c, v in terms]
    if not cells:
        return {}
    floor = min(c.level for c, _ in cells)

    # split cells that strictly contain another one
    while True:
        covering = set()
        for cell, _ in cells:
            up = parent(cell)
            while up is not None and up.level >= floor:
                if up in covering:
                    break
                covering.add(up)
                up = parent(up)
        split = [(cell, value) for cell, value in cells if cell in covering]
        if not split:
            break
        cells = [(cell, value) for cell, value in cells if cell not in covering]
        cells.extend((child, value) for cell, value in split for child in cell.children())

    acc: Dict[Cell, Scalar] = {}
    for cell, value in cells:
        acc[cell] = acc[cell] + value if cell in acc else value
    acc = {cell: normalize_scalar(value) for cell, value in acc.items() if not _drop(value)}

    # merge complete families with equal coefficients
    changed = True
    while changed:
        changed = False
        families: Dict[Hashable, List[Cell]] = defaultdict(list)
        for cell in acc:
            up = parent(cell)
            if up is not None:
                families[up].append(cell)
        for up, kids in families.items():
            if len(kids) != family_size(up):
                continue
            first = acc[kids[0]]
            if all(_same(acc[k], first) for k in kids[1:]):
                for k in kids:
                    del acc[k]
                acc[up] = first
                changed = True
    return acc
