"""Configuration models for satcn experiments."""

from __future__ import annotations

import hashlib
import json
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from typing_extensions import Annotated

from .core import get_input_content
from .log import SatcnLogLevel
from .types import AGGREGATORS, SCALERS, Activation, Aggregator, Metric, Scaler


class SatcnBaseModel(BaseModel):
    """Customized pydantic BaseModel for satcn configuration."""

    model_config = dict(
        extra="forbid",
        validate_assignment=True,
        populate_by_name=True,
        str_strip_whitespace=True,
    )


# --------
# Model and training configuration


class ArchConfig(SatcnBaseModel):
    """Architecture of a SATCN model.

    Block `l` is a SAN layer with `channels[l]` outputs followed by a TCN of
    width `tcn_widths[l]` that keeps the channel count. The first SAN layer
    uses the masked graph, all later ones the full graph.
    """

    @model_validator(mode="after")
    def matching_blocks(self):
        """Check that every SAN layer has a TCN partner."""
        if len(self.channels) != len(self.tcn_widths):
            msg = "channels and tcn_widths must have the same length."
            raise ValueError(msg)
        return self

    k: Annotated[int, Field(ge=1, description="Number of nearest neighbors.")] = 3
    channels: Annotated[
        List[Annotated[int, Field(ge=1)]],
        Field(min_length=1, description="Output channels of each SAN layer."),
    ] = [32, 32]
    tcn_widths: Annotated[
        List[Annotated[int, Field(ge=1)]],
        Field(min_length=1, description="Kernel width of each TCN layer."),
    ] = [2, 2]
    h: Annotated[
        int, Field(ge=1, description="Number of estimated steps per training window.")
    ] = 6
    n_m: Annotated[
        Optional[int],
        Field(
            ge=0,
            description="Hidden sensors per sample (default: n/20 rounded up).",
        ),
    ] = None
    activation: Annotated[
        Activation, Field(description="Activation after each SAN layer.")
    ] = Activation.relu
    epsilon: Annotated[
        float, Field(gt=0, description="Variance floor of the std aggregators.")
    ] = 1e-5
    aggregators: Annotated[
        List[Aggregator],
        Field(min_length=1, description="Aggregators used by the SAN layers."),
    ] = list(AGGREGATORS)
    scalers: Annotated[
        List[Scaler],
        Field(min_length=1, description="Scalers used by the SAN layers."),
    ] = list(SCALERS)

    @field_validator("aggregators", "scalers")
    @classmethod
    def canonical_order(cls, values):
        """Sort the selection into the fixed stacking order and drop duplicates."""
        order = list(type(values[0]))
        return [v for v in order if v in set(values)]

    @property
    def u(self) -> int:
        """Temporal reduction of the whole network."""
        return sum(w - 1 for w in self.tcn_widths)

    def masked_count(self, n: int) -> int:
        """Return the number of hidden sensors for a training set of size n."""
        n_m = self.n_m if self.n_m is not None else max(1, math.ceil(n / 20))
        return min(n_m, n - 1)


class TrainConfig(SatcnBaseModel):
    """Optimizer and schedule of the training loop."""

    learning_rate: Annotated[float, Field(gt=0, description="Adam step size.")] = 1e-3
    beta1: Annotated[
        float, Field(ge=0, lt=1, description="Adam first moment decay.")
    ] = 0.9
    beta2: Annotated[
        float, Field(ge=0, lt=1, description="Adam second moment decay.")
    ] = 0.999
    adam_epsilon: Annotated[
        float, Field(gt=0, description="Adam denominator offset.")
    ] = 1e-8
    iterations: Annotated[
        int, Field(ge=0, description="Maximum number of iterations (I_max).")
    ] = 2000
    batch_size: Annotated[
        int, Field(ge=1, description="Samples per iteration (S).")
    ] = 8
    seed: Annotated[int, Field(description="Seed of the training generator.")] = 0
    val_fraction: Annotated[
        float,
        Field(ge=0, lt=1, description="Fraction of sensors held out for validation."),
    ] = 0.1
    val_every: Annotated[
        int, Field(ge=1, description="Iterations between validation runs.")
    ] = 50
    val_window: Annotated[
        int, Field(ge=1, description="Steps of the validation window (last steps).")
    ] = 288
    patience: Annotated[
        int,
        Field(
            ge=0,
            description="Stop after this many validations without improvement (0: never).",
        ),
    ] = 0
    loss_on_masked_only: Annotated[
        bool, Field(description="Evaluate the loss only on hidden sensors.")
    ] = True
    log_every: Annotated[
        int, Field(ge=1, description="Iterations between progress messages.")
    ] = 50


# --------
# Data, scenarios and synthetic fields

_SCENARIO_RE = re.compile(r"^(\d)T(\d)S(?:(\d)M)?$")


class ScenarioSpec(SatcnBaseModel):
    """Train/test split of sensors and time, with optional missing data.

    A name like `7T8S` (70% of the time, 80% of the sensors for training) or
    `5T5S5M` (plus 50% of the training cells removed) sets the fractions.
    """

    @model_validator(mode="before")
    @classmethod
    def fractions_from_name(cls, values):
        """Derive the fractions from a scenario name, if given."""
        if not isinstance(values, dict) or not values.get("name"):
            return values
        m = _SCENARIO_RE.match(str(values["name"]).strip().upper())
        if m is None:
            raise ValueError(f"Invalid scenario name: {values['name']}")
        values = dict(values)
        values["time_frac"] = int(m.group(1)) / 10
        values["space_frac"] = int(m.group(2)) / 10
        values["missing_ratio"] = int(m.group(3) or 0) / 10
        return values

    name: Annotated[
        Optional[str], Field(description="Scenario name, e.g. 7T8S or 5T5S5M.")
    ] = None
    time_frac: Annotated[
        float, Field(gt=0, lt=1, description="Fraction of steps used for training.")
    ] = 0.7
    space_frac: Annotated[
        float, Field(gt=0, lt=1, description="Fraction of sensors used for training.")
    ] = 0.8
    missing_ratio: Annotated[
        float,
        Field(ge=0, lt=1, description="Fraction of training cells made unobserved."),
    ] = 0.0
    seed: Annotated[int, Field(description="Seed of the split.")] = 0


class SyntheticFieldSpec(SatcnBaseModel):
    """Smooth random field sampled at random sensor positions."""

    n: Annotated[int, Field(ge=4, description="Number of sensors.")] = 50
    T: Annotated[int, Field(ge=1, description="Number of time steps.")] = 2000
    n_basis: Annotated[
        int, Field(ge=1, description="Number of spatial basis functions.")
    ] = 5
    length_scale: Annotated[
        float, Field(gt=0, description="Length scale of the spatial bumps.")
    ] = 0.25
    frequencies: Annotated[
        List[Annotated[float, Field(gt=0)]],
        Field(min_length=1, description="Temporal frequencies (cycles per step)."),
    ] = [1 / 200, 1 / 97, 1 / 53, 1 / 31, 1 / 17]
    noise_std: Annotated[float, Field(ge=0, description="Noise standard deviation.")] = (
        0.0
    )
    noise_relative: Annotated[
        bool, Field(description="Interpret noise_std relative to the signal std.")
    ] = False
    seed: Annotated[int, Field(description="Seed of the generator.")] = 0


class DataConfig(SatcnBaseModel):
    """Input files of an experiment."""

    panel_file: Annotated[
        Optional[Path], Field(description="Panel CSV (timestamp + one column per id).")
    ] = None
    sensor_file: Annotated[
        Optional[Path],
        Field(description="Sensor CSV (id,x,y / id,lat,lon / distance matrix)."),
    ] = None
    metric: Annotated[
        Optional[Metric],
        Field(description="Distance metric (default: inferred from the header)."),
    ] = None

    @field_validator("panel_file", "sensor_file")
    @classmethod
    def file_exists(cls, path):
        """Referenced files must exist."""
        if path is not None and not Path(path).is_file():
            raise ValueError(f"File does not exist: {path}")
        return path


# --------
# Root configuration


class ExperimentConfig(SatcnBaseModel):
    """The complete satcn configuration (`satcn.toml` or `[tool.satcn]`).

    Note that the log flags, `output_dir` and `seed` match CLI options, and CLI
    options override the values of the file.
    """

    @model_validator(mode="after")
    def propagate_seed(self):
        """Use the root seed for training, scenario and synthetic data."""
        if self.seed is not None:
            for sub in (self.train, self.scenario, self.synthetic):
                if sub.seed != self.seed:
                    sub.seed = self.seed
        return self

    # cli flags
    show_info: Annotated[
        bool, Field(description="Show basic information messages on run (-v flag).")
    ] = False
    verbose: Annotated[
        bool, Field(description="Show verbose messages on run (-vv flag).")
    ] = False
    debug: Annotated[
        bool, Field(description="Show debug messages on run (-vvv flag).")
    ] = False

    output_dir: Annotated[
        Path, Field(description="Directory for all written artifacts.")
    ] = Path("satcn-out")
    seed: Annotated[
        Optional[int], Field(description="Seed overriding all other seeds.")
    ] = None

    data: Annotated[DataConfig, Field(description="Input files.")] = DataConfig()
    scenario: Annotated[
        ScenarioSpec, Field(description="Train/test scenario.")
    ] = ScenarioSpec()
    arch: Annotated[ArchConfig, Field(description="Model architecture.")] = (
        ArchConfig()
    )
    train: Annotated[TrainConfig, Field(description="Training settings.")] = (
        TrainConfig()
    )
    synthetic: Annotated[
        SyntheticFieldSpec,
        Field(description="Synthetic field used when no data files are given."),
    ] = SyntheticFieldSpec()
    knn_k: Annotated[
        List[Annotated[int, Field(ge=1)]],
        Field(min_length=1, description="Neighbor counts of the kNN baseline."),
    ] = [1, 2, 3, 5, 8]

    def log_level(self) -> SatcnLogLevel:
        """Return log level derived from this configuration."""
        return SatcnLogLevel.from_flags(
            info=self.show_info, verbose=self.verbose, debug=self.debug
        )

    def update_log_level(self, log_level: SatcnLogLevel):
        """Update config flags according to passed log level."""
        self.show_info = log_level == SatcnLogLevel.INFO
        self.verbose = log_level == SatcnLogLevel.VERBOSE
        self.debug = log_level == SatcnLogLevel.DEBUG

    def config_hash(self) -> str:
        """Return a short stable hash of everything that affects results."""
        dct = self.model_dump(
            mode="json", exclude={"show_info", "verbose", "debug", "output_dir"}
        )
        blob = json.dumps(dct, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def effective_seed(self) -> int:
        """Return the seed recorded in artifacts."""
        return self.seed if self.seed is not None else self.train.seed

    @classmethod
    def from_input_file(cls, path: Path) -> ExperimentConfig:
        """Load the configuration from a satcn.toml or pyproject.toml file."""
        return cls(**get_input_content(path))

    def merged(self, overrides: Dict[str, Any]) -> ExperimentConfig:
        """Return a copy with dotted keys (e.g. `train.iterations`) overridden."""
        dct = self.model_dump()
        for key, value in overrides.items():
            if value is None:
                continue
            *parents, leaf = key.split(".")
            target = dct
            for p in parents:
                target = target.setdefault(p, {})
            target[leaf] = value
        return ExperimentConfig(**dct)
