"""Domain models package."""

from argextract.models.agent import AAAgentModel, StateVector, TeamMode, TeamModel
from argextract.models.argumentation import (
    ArgumentationFramework,
    ArgumentId,
    ExtensionSet,
    UnknownArgumentError,
)
from argextract.models.arguments import (
    ActionArgument,
    AgentIndex,
    ArgumentCatalog,
    CatalogError,
    ConditionSpec,
    InvalidValuesError,
    MissingValueError,
    ValueAssignment,
)
from argextract.models.base import BaseModel
from argextract.models.environment import (
    Environment,
    EpisodeStats,
    GridSpec,
    InvalidActionError,
    MountainCarAction,
    MountainCarParams,
    MountainCarState,
    TakeawayFeatureState,
    TakeawayParams,
)
from argextract.models.evaluation import (
    FidelityReport,
    InspectionReport,
    PolicyGrid,
    PolicyGridDiff,
)
from argextract.models.extraction import (
    AcyclicResult,
    ArgumentPreferenceGraph,
    DuplicateIdError,
    ExtractionConfig,
    ExtractionResult,
    Ordering,
)
from argextract.models.trajectory import Episode, TimeStep, TrajectorySchemaError, TrajectorySet

__all__ = [
    'AAAgentModel',
    'AcyclicResult',
    'ActionArgument',
    'AgentIndex',
    'ArgumentCatalog',
    'ArgumentId',
    'ArgumentPreferenceGraph',
    'ArgumentationFramework',
    'BaseModel',
    'CatalogError',
    'ConditionSpec',
    'DuplicateIdError',
    'Environment',
    'Episode',
    'EpisodeStats',
    'ExtensionSet',
    'ExtractionConfig',
    'ExtractionResult',
    'FidelityReport',
    'GridSpec',
    'InspectionReport',
    'InvalidActionError',
    'InvalidValuesError',
    'MissingValueError',
    'MountainCarAction',
    'MountainCarParams',
    'MountainCarState',
    'Ordering',
    'PolicyGrid',
    'PolicyGridDiff',
    'StateVector',
    'TakeawayFeatureState',
    'TakeawayParams',
    'TeamMode',
    'TeamModel',
    'TimeStep',
    'TrajectorySchemaError',
    'TrajectorySet',
    'UnknownArgumentError',
    'ValueAssignment',
]
