"""Extension semantics for abstract argumentation frameworks."""
import logging
from collections import deque
from typing import Iterable

from argextract.config import get_config
from argextract.errors import DataError
from argextract.models.argumentation import (
    ArgumentationFramework,
    ArgumentId,
    ExtensionSet,
    UnknownArgumentError,
)

logger = logging.getLogger(__name__)


class OracleSizeError(DataError):
    """Raised when a framework is too large for subset enumeration."""
    pass


def _require_members(af: ArgumentationFramework, ids: Iterable[ArgumentId]) -> None:
    unknown = [a for a in ids if a not in af.arguments]
    if unknown:
        raise UnknownArgumentError(unknown)


def set_attacks(af: ArgumentationFramework, s: ExtensionSet, a: ArgumentId) -> bool:
    """True iff some member of `s` attacks `a`."""
    _require_members(af, [a, *s.members])
    return not af.attackers[a].isdisjoint(s.members)


def is_conflict_free(af: ArgumentationFramework, s: ExtensionSet) -> bool:
    _require_members(af, s.members)
    return all(af.attackers[a].isdisjoint(s.members) for a in s.members)


def defends(af: ArgumentationFramework, s: ExtensionSet, a: ArgumentId) -> bool:
    """True iff `s` attacks every attacker of `a`."""
    _require_members(af, [a, *s.members])
    return all(not af.attackers[b].isdisjoint(s.members) for b in af.attackers[a])


def characteristic_function(af: ArgumentationFramework, s: ExtensionSet) -> ExtensionSet:
    """The set of arguments `s` defends."""
    _require_members(af, s.members)
    attacked = {target for member in s.members for target in af.targets[member]}
    return ExtensionSet(
        frozenset(a for a in af.arguments if af.attackers[a] <= attacked)
    )


def iterate_characteristic(af: ArgumentationFramework) -> ExtensionSet:
    """Apply the characteristic function from the empty set until it stops changing.

    Terminates within |arguments| + 1 applications. Used to cross-check
    `grounded_extension`.
    """
    current = ExtensionSet()
    for _ in range(len(af.arguments) + 1):
        following = characteristic_function(af, current)
        if following == current:
            return current
        current = following
    return current


def grounded_extension(af: ArgumentationFramework) -> ExtensionSet:
    """Least fixpoint of the characteristic function.

    Computed by propagation: an argument is accepted once all its attackers
    are rejected, and rejected once an accepted argument attacks it. Each
    attack is visited at most twice, so this is linear in the framework.
    """
    live_attackers = {a: len(af.attackers[a]) for a in af.arguments}
    accepted: set[ArgumentId] = set()
    rejected: set[ArgumentId] = set()
    queue = deque(sorted(a for a, count in live_attackers.items() if count == 0))

    while queue:
        argument = queue.popleft()
        if argument in accepted or argument in rejected:
            continue
        accepted.add(argument)
        for target in sorted(af.targets[argument]):
            if target in rejected:
                continue
            rejected.add(target)
            for victim in af.targets[target]:
                live_attackers[victim] -= 1
                if live_attackers[victim] == 0 and victim not in rejected:
                    queue.append(victim)

    return ExtensionSet(frozenset(accepted))


def enumerate_complete_extensions(
    af: ArgumentationFramework,
    max_arguments: int | None = None,
) -> list[ExtensionSet]:
    """Every complete extension, by brute force over all subsets.

    Results are ordered by size, then by their sorted members. Intended as a
    test oracle for `grounded_extension`.

    Raises:
        OracleSizeError: If the framework has more than `max_arguments`
            arguments (default ORACLE_MAX_ARGUMENTS)
    """
    bound = get_config().ORACLE_MAX_ARGUMENTS if max_arguments is None else max_arguments
    names = af.sorted_arguments()
    if len(names) > bound:
        raise OracleSizeError(
            f"Framework has {len(names)} arguments; enumeration is limited to {bound}"
        )

    bit = {name: 1 << k for k, name in enumerate(names)}
    attacker_mask = [sum(bit[b] for b in af.attackers[a]) for a in names]
    target_mask = [sum(bit[b] for b in af.targets[a]) for a in names]

    complete: list[int] = []
    for subset in range(1 << len(names)):
        attacked = 0
        for k in range(len(names)):
            if subset >> k & 1:
                attacked |= target_mask[k]
        if attacked & subset:
            continue
        defended = 0
        for k in range(len(names)):
            if attacker_mask[k] & ~attacked == 0:
                defended |= 1 << k
        if defended == subset:
            complete.append(subset)

    extensions = [
        ExtensionSet(frozenset(n for k, n in enumerate(names) if subset >> k & 1))
        for subset in complete
    ]
    extensions.sort(key=lambda e: (len(e), e.sorted_members()))
    logger.debug(f"Enumerated {len(extensions)} complete extension(s) over {len(names)} arguments")
    return extensions
