"""Driver-proposing marriage matching over incomplete lists, blocking-pair
detection and a brute-force enumerator of stable matchings for small cases."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple

from .errors import SizeError, StructuralError
from .preferences import PreferenceList

Lists = Mapping[str, PreferenceList]
MAX_ENUMERATION_SIDE = 8


@dataclass(frozen=True)
class Matching:
    pairs: FrozenSet[Tuple[str, str]]
    unmatched_drivers: FrozenSet[str]
    unmatched_spots: FrozenSet[str]

    @classmethod
    def from_assignment(
        cls, assignment: Mapping[str, str], driver_ids, spot_ids
    ) -> "Matching":
        """Build from a driver -> spot map; everyone else is unmatched."""
        taken = set(assignment.values())
        if len(taken) != len(assignment):
            raise StructuralError("a spot is assigned to more than one driver")
        return cls(
            frozenset(assignment.items()),
            frozenset(d for d in driver_ids if d not in assignment),
            frozenset(p for p in spot_ids if p not in taken),
        )

    def spot_of(self) -> Dict[str, str]:
        return dict(self.pairs)

    def driver_of(self) -> Dict[str, str]:
        return {p: d for d, p in self.pairs}

    @property
    def size(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> List[Tuple[str, str]]:
        return sorted(self.pairs)


@dataclass(frozen=True, order=True)
class BlockingPair:
    driver: str
    spot: str


@dataclass(frozen=True)
class ProposalTrace:
    proposal_count: int = 0
    displacements: int = 0


def mm_match(driver_lists: Lists, spot_lists: Lists) -> Tuple[Matching, ProposalTrace]:
    """Driver-proposing deferred acceptance with a circular queue.

    Drivers leave the queue in ascending id order; a rejected or displaced
    driver goes to the back. A driver whose list runs out stays unmatched.
    """
    queue = deque(sorted(driver_lists))
    next_choice = dict.fromkeys(driver_lists, 0)
    holder: Dict[str, str] = {}
    proposals = 0
    displacements = 0

    while queue:
        d = queue.popleft()
        ranked = driver_lists[d].ids
        k = next_choice[d]
        if k >= len(ranked):
            continue  # exhausted: permanently unmatched
        p = ranked[k]
        next_choice[d] = k + 1
        proposals += 1
        try:
            rank = spot_lists[p].rank
        except KeyError:
            raise StructuralError(f"{d} proposed to unknown spot {p}") from None
        rd = rank.get(d)
        if rd is None:
            raise StructuralError(f"{d} lists {p} but {p} does not list {d}")
        current = holder.get(p)
        if current is None:
            holder[p] = d
        elif rd < rank[current]:
            holder[p] = d
            queue.append(current)
            displacements += 1
        else:
            queue.append(d)

    assignment = {d: p for p, d in holder.items()}
    matching = Matching.from_assignment(assignment, driver_lists, spot_lists)
    return matching, ProposalTrace(proposals, displacements)


def find_blocking_pairs(m: Matching, driver_lists: Lists, spot_lists: Lists) -> Set[BlockingPair]:
    spot_of = m.spot_of()
    driver_of = m.driver_of()
    blocking = set()
    for d, dl in driver_lists.items():
        mine = spot_of.get(d)
        for p in dl.ids:
            if p == mine:
                break  # everything further down is worse than the partner
            sl = spot_lists.get(p)
            if sl is not None and sl.prefers(d, driver_of.get(p)):
                blocking.add(BlockingPair(d, p))
    return blocking


def is_stable(m: Matching, driver_lists: Lists, spot_lists: Lists) -> bool:
    """Stability means no blocking pair; the matched-count is not part of it."""
    return not find_blocking_pairs(m, driver_lists, spot_lists)


def mutual_edges(driver_lists: Lists, spot_lists: Lists) -> Dict[str, List[str]]:
    """For every driver, the spots that list it back, in driver order."""
    return {
        d: [p for p in dl.ids if p in spot_lists and d in spot_lists[p]]
        for d, dl in driver_lists.items()
    }


def enumerate_matchings(driver_lists: Lists, spot_lists: Lists) -> Iterator[Matching]:
    """Every matching (including partial and empty ones) over mutually
    listed pairs."""
    drivers = sorted(driver_lists)
    options = mutual_edges(driver_lists, spot_lists)
    chosen: Dict[str, str] = {}
    used: Set[str] = set()

    def walk(i: int) -> Iterator[Matching]:
        if i == len(drivers):
            yield Matching.from_assignment(chosen, driver_lists, spot_lists)
            return
        d = drivers[i]
        yield from walk(i + 1)
        for p in options[d]:
            if p in used:
                continue
            chosen[d] = p
            used.add(p)
            yield from walk(i + 1)
            used.discard(p)
            del chosen[d]

    return walk(0)


def _naive_blocks(m: Matching, driver_lists: Lists, spot_lists: Lists) -> bool:
    # Independent of find_blocking_pairs: scans the full driver x spot grid
    # and compares list positions directly.
    spot_of = m.spot_of()
    driver_of = m.driver_of()
    for d, dl in driver_lists.items():
        for p, sl in spot_lists.items():
            if spot_of.get(d) == p or p not in dl.ids or d not in sl.ids:
                continue
            cur_p: Optional[str] = spot_of.get(d)
            cur_d: Optional[str] = driver_of.get(p)
            d_wants = cur_p is None or dl.ids.index(p) < dl.ids.index(cur_p)
            p_wants = cur_d is None or sl.ids.index(d) < sl.ids.index(cur_d)
            if d_wants and p_wants:
                return True
    return False


def enumerate_stable_matchings(driver_lists: Lists, spot_lists: Lists) -> Set[Matching]:
    """All stable matchings by exhaustive search; sides are capped at 8."""
    if len(driver_lists) > MAX_ENUMERATION_SIDE or len(spot_lists) > MAX_ENUMERATION_SIDE:
        raise SizeError(
            f"enumeration limited to {MAX_ENUMERATION_SIDE}x{MAX_ENUMERATION_SIDE}, "
            f"got {len(driver_lists)}x{len(spot_lists)}"
        )
    return {
        m for m in enumerate_matchings(driver_lists, spot_lists)
        if not _naive_blocks(m, driver_lists, spot_lists)
    }
