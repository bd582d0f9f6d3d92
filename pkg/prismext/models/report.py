from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from prismext.config import DEFAULT_SAMPLE_COUNT, DEFAULT_SEED


# Characterizations
class ConditionKind(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    AH_A = "AH_A"
    AH_B = "AH_B"
    COMPLETE_EVEN = "CompleteEvenMatching"
    COMPLETE_ODD = "CompleteOddTriangle"
    NONE = "None"


class ConditionReport(BaseModel):
    """Какое условие нерасширяемости выполнено и конкретный свидетель."""

    condition: ConditionKind
    witness: Dict[str, Any] = Field(default_factory=dict)

    @property
    def fired(self) -> bool:
        return self.condition is not ConditionKind.NONE

    @classmethod
    def none(cls) -> "ConditionReport":
        return cls(condition=ConditionKind.NONE)


# Harness
class EnumerationKind(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


class EnumerationMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: EnumerationKind = EnumerationKind.EXHAUSTIVE
    seed: int = DEFAULT_SEED
    count: int = Field(DEFAULT_SAMPLE_COUNT, ge=0)
    force: bool = Field(False, description="Разрешить полный перебор сверх лимита")

    @classmethod
    def exhaustive(cls, force: bool = False) -> "EnumerationMode":
        return cls(kind=EnumerationKind.EXHAUSTIVE, force=force)

    @classmethod
    def sample(cls, seed: int = DEFAULT_SEED, count: int = DEFAULT_SAMPLE_COUNT) -> "EnumerationMode":
        return cls(kind=EnumerationKind.SAMPLE, seed=seed, count=count)


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"
    CONJECTURE_CONSISTENT = "CONJECTURE_CONSISTENT"
    ANTECEDENT_FAILS = "ANTECEDENT_FAILS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


class FailureWitness(BaseModel):
    """Экземпляр, на котором проверка не прошла (канонический номер + раскраска)."""

    index: int
    status: str
    palette: int
    precolored: List[Tuple[int, int, int]]
    note: Optional[str] = None


class VerificationReport(BaseModel):
    graph: str
    vertex_count: int
    edge_count: int
    method: Optional[str] = None
    k: int
    palette: int
    mode: EnumerationMode
    total: int = 0
    extended: int = 0
    not_extendable: int = 0
    unknown: int = 0
    fallbacks: int = 0
    mismatches: int = 0
    failures: List[FailureWitness] = Field(default_factory=list)
    verdict: Verdict = Verdict.INCONCLUSIVE
    antecedent: Optional["VerificationReport"] = None
    # в JSON не попадает: отчёты должны быть побайтно воспроизводимы
    wall_time: float = Field(0.0, exclude=True)

    @model_validator(mode="after")
    def _counters_add_up(self) -> "VerificationReport":
        if self.extended + self.not_extendable + self.unknown != self.total:
            raise ValueError("extended + not_extendable + unknown != total")
        return self
