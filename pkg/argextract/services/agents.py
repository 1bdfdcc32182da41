"""Action selection for argumentation-based agents and teams.

State to action runs in three steps: collect the arguments whose conditions
hold, keep the attacks that survive value preference, and read the action
off the agent's accepted primary arguments in the grounded extension.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from argextract.errors import InvariantViolation
from argextract.models.agent import AAAgentModel, StateVector, TeamMode, TeamModel
from argextract.models.argumentation import ArgumentationFramework, ArgumentId, Attack, ExtensionSet
from argextract.models.arguments import ActionArgument, AgentIndex, ArgumentCatalog, ValueAssignment
from argextract.services.conditions import catalog_index
from argextract.services.semantics import grounded_extension

logger = logging.getLogger(__name__)


class InconsistentSelectionError(InvariantViolation):
    """Raised when accepted primary arguments recommend different actions."""
    pass


@dataclass(frozen=True)
class ActionExplanation:
    """Intermediate results of one action selection."""
    applicable: tuple[ArgumentId, ...]
    defeats: ArgumentationFramework
    grounded: ExtensionSet
    primary: tuple[ArgumentId, ...]
    action: str
    used_default: bool


def applicable_arguments(catalog: ArgumentCatalog, state: StateVector) -> list[ActionArgument]:
    """Arguments whose conditions hold in `state`, in catalog order."""
    positions = catalog_index(catalog).query(catalog.arguments, state)
    return [catalog.arguments[k] for k in positions]


def build_attacks(applicable: Sequence[ActionArgument]) -> frozenset[Attack]:
    """Symmetric attacks between conflicting recommendations.

    Two arguments conflict when they recommend the same action to different
    agents, or different actions to the same agent.
    """
    attacks: set[Attack] = set()
    for k, a in enumerate(applicable):
        for b in applicable[k + 1:]:
            same_action = a.action == b.action
            same_target = a.target == b.target
            if same_action != same_target and a.id != b.id:
                attacks.add((a.id, b.id))
                attacks.add((b.id, a.id))
    return frozenset(attacks)


def _defeats(
    ids: Iterable[ArgumentId],
    attacks: Iterable[Attack],
    values: ValueAssignment,
) -> ArgumentationFramework:
    ids = list(ids)
    values.require(ids)
    return ArgumentationFramework.build(
        ids, ((a, b) for a, b in attacks if values[a] > values[b])
    )


def build_defeat_graph(
    applicable: Sequence[ActionArgument],
    values: ValueAssignment,
) -> ArgumentationFramework:
    """Framework over `applicable` keeping only attacks from the higher-valued side.

    Raises:
        MissingValueError: If an applicable argument has no value
    """
    return _defeats((a.id for a in applicable), build_attacks(applicable), values)


def _read_action(
    applicable: Sequence[ActionArgument],
    grounded: ExtensionSet,
    self_index: AgentIndex,
    default_action: str,
) -> tuple[str, tuple[ArgumentId, ...], bool]:
    primary = tuple(a for a in applicable if a.target == self_index and a.id in grounded)
    if not primary:
        return default_action, (), True
    actions = {a.action for a in primary}
    if len(actions) > 1:
        raise InconsistentSelectionError(
            f"Accepted primary arguments of agent {self_index} disagree: "
            + ", ".join(f"{a.id}->{a.action}" for a in primary)
        )
    return primary[0].action, tuple(a.id for a in primary), False


def explain_action(agent: AAAgentModel, state: StateVector) -> ActionExplanation:
    """Select an action and keep every intermediate step."""
    applicable = applicable_arguments(agent.catalog, state)
    defeats = build_defeat_graph(applicable, agent.values)
    grounded = grounded_extension(defeats)
    action, primary, used_default = _read_action(
        applicable, grounded, agent.self_index, agent.default_action
    )
    return ActionExplanation(
        applicable=tuple(a.id for a in applicable),
        defeats=defeats,
        grounded=grounded,
        primary=primary,
        action=action,
        used_default=used_default,
    )


def select_action(agent: AAAgentModel, state: StateVector) -> str:
    """The action recommended by the agent's accepted primary arguments.

    Falls back to the agent's default action when none is accepted.

    Raises:
        InconsistentSelectionError: If accepted primary arguments disagree
    """
    return explain_action(agent, state).action


def select_joint_action(team: TeamModel, state: StateVector) -> dict[AgentIndex, str]:
    """Actions for every team member.

    Decentralized teams resolve one defeat graph per member; centralized teams
    resolve a single defeat graph over the shared values and read each
    member's action from it.
    """
    applicable = applicable_arguments(team.catalog, state)
    ids = [a.id for a in applicable]
    attacks = build_attacks(applicable)

    if team.mode is TeamMode.CENTRALIZED:
        assert team.shared_values is not None
        grounded = grounded_extension(_defeats(ids, attacks, team.shared_values))
        return {
            member.self_index: _read_action(
                applicable, grounded, member.self_index, member.default_action
            )[0]
            for member in team.members
        }

    joint: dict[AgentIndex, str] = {}
    for member in team.members:
        grounded = grounded_extension(_defeats(ids, attacks, member.values))
        joint[member.self_index] = _read_action(
            applicable, grounded, member.self_index, member.default_action
        )[0]
    return joint
