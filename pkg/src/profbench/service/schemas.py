"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from .. import nested, timings


class TimingTable(BaseModel):
    """Wire form of a timing table; mirrors the JSON file layout."""

    problems: list[str]
    solvers: list[str]
    times: list[list[Union[float, str]]]

    def to_matrix(self) -> timings.TimingMatrix:
        return timings.matrix_from_obj(self.model_dump())

    @classmethod
    def from_matrix(cls, m: timings.TimingMatrix) -> "TimingTable":
        return cls(**timings.matrix_to_obj(m))


class ProfileOptions(BaseModel):
    """Computation knobs; maps onto the library's ProfileConfig."""

    failure_ratio: Union[float, Literal["auto"]] = "auto"
    rule: Literal["wins", "mean"] = "wins"
    tie_seed: Optional[int] = None
    waves: Union[int, Literal["all"]] = "all"
    reporting_tau: float = 1.0

    def to_config(self) -> nested.ProfileConfig:
        tie = (
            nested.SeededRandom(self.tie_seed)
            if self.tie_seed is not None
            else nested.FIRST_INDEX
        )
        return nested.ProfileConfig(
            failure_ratio=self.failure_ratio,
            rule=nested.SelectionRule(self.rule),
            tie_break=tie,
            waves=self.waves,
            reporting_tau=self.reporting_tau,
        )


class ProfileRequest(BaseModel):
    table: TimingTable
    config: ProfileOptions = Field(default_factory=ProfileOptions)
    tau: Optional[float] = None


class NestedRequest(BaseModel):
    table: TimingTable
    config: ProfileOptions = Field(default_factory=ProfileOptions)


class GenerateRequest(BaseModel):
    solvers: int
    sizes: Optional[list[int]] = None
    time_base: float = 1.0


class PlotOptions(BaseModel):
    log2: bool = False
    tau_max: Optional[float] = None
    tau_max_fraction: Optional[float] = None
    width: int = 800
    height: int = 500
    title: str = ""


class PlotRequest(BaseModel):
    table: TimingTable
    config: ProfileOptions = Field(default_factory=ProfileOptions)
    source: Literal["classic", "overall"] = "classic"
    plot: PlotOptions = Field(default_factory=PlotOptions)


class CurveModel(BaseModel):
    tau: list[float]
    value: list[float]


class ProfileResponse(BaseModel):
    solvers: list[str]
    failure_ratio: float
    curves: dict[str, CurveModel]
    values_at_tau: Optional[dict[str, float]] = None


class RankEntry(BaseModel):
    rank: int
    solver: str
    value: float
    via: str


class RankResponse(BaseModel):
    ranking: list[str]
    reporting_tau: float
    entries: list[RankEntry]
    convention: str


class FlipResponse(BaseModel):
    removed: str
    classic_full: list[str]
    classic_reduced: list[str]
    flipped: bool
    nested_ranking: list[str]
    nested_reduced: list[str]
    nested_stable: bool
    reporting_tau: float
