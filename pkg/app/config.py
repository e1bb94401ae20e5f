from pathlib import Path
from typing import Any, Literal, Optional, Tuple, Type

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from app.schemas.em import EmConfig

DEFAULT_CONFIG_FILE = Path("ssemc.env")


class Settings(BaseSettings):
    """
    Run configuration: defaults < environment < config file < CLI flags

    The config file is flat `key = value` text (dotenv syntax).
    """

    # Data
    dataset_path: Path = Field(
        default=Path("data/car.csv"), description="Car evaluation dataset (CSV)")
    stopword_path: Optional[Path] = Field(
        default=None, description="Stopword file, one word per line (bundled list when empty)")
    output_dir: Path = Field(default=Path("output"), description="Directory for every output file")
    labeled_size: int = Field(
        default=75, ge=1, description="Train-half records that keep their labels")
    strict_labels: bool = Field(
        default=True, description="Reject dataset labels outside the class registry")

    # Model / EM
    alpha: float = Field(default=1.0, gt=0, description="Additive smoothing pseudo-count")
    unlabeled_weight: float = Field(
        default=1.0,
        ge=0,
        le=1,
        validation_alias=AliasChoices("lambda", "unlabeled_weight"),
        description="Relative weight of unlabeled documents (lambda)",
    )
    tolerance: float = Field(default=1e-6, gt=0, description="Relative objective change to stop EM")
    max_iterations: int = Field(default=100, ge=1, description="EM iteration cap")
    seed: int = Field(default=7, description="Seed for splits and generated data")

    # Novelty
    novelty_threshold: float = Field(
        default=0.5, gt=0, lt=1, description="Minimum max-posterior of a known document")
    zscore_k: float = Field(default=3.0, gt=0, description="Half-width of attribute ranges in stds")
    min_domain_hits: int = Field(
        default=1, ge=1, description="Distinct car words needed to pass the domain check")

    # Runtime
    workers: int = Field(default=1, ge=1, description="Threads used to load documents")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO", description="Log level of the command line")

    model_config = SettingsConfigDict(
        env_file=DEFAULT_CONFIG_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
        populate_by_name=True,
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Config file outranks the environment
        return init_settings, dotenv_settings, env_settings

    @classmethod
    def load(cls, config_file: Optional[Path] = None, **overrides: Any) -> "Settings":
        """Settings from the config file, with non-None overrides taking precedence"""
        explicit = {key: value for key, value in overrides.items() if value is not None}
        env_file = config_file if config_file is not None else DEFAULT_CONFIG_FILE
        return cls(_env_file=env_file, **explicit)

    @property
    def em_config(self) -> EmConfig:
        return EmConfig(
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            unlabeled_weight=self.unlabeled_weight,
            alpha=self.alpha,
            seed=self.seed,
        )

    # Output layout
    @property
    def model_path(self) -> Path:
        return self.output_dir / "model.ssemc"

    @property
    def registry_path(self) -> Path:
        return self.output_dir / "registry.csv"

    @property
    def trace_path(self) -> Path:
        return self.output_dir / "trace.csv"

    @property
    def metrics_path(self) -> Path:
        return self.output_dir / "metrics.csv"

    @property
    def comparison_path(self) -> Path:
        return self.output_dir / "comparison.csv"

    def to_config_text(self) -> str:
        """Render every setting as a `key = value` line; unset optionals stay commented"""
        lines = []
        for name in type(self).model_fields:
            value = getattr(self, name)
            key = "lambda" if name == "unlabeled_weight" else name
            if value is None:
                lines.append(f"# {key} =")
            else:
                lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"
