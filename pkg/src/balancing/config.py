"""Run configuration: an INI file with one section per concern.

Every key is optional; missing keys keep the defaults below, which describe
the balancing problem for ``k = l = 5``.
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .bounds import SLOPE_CONVENTIONS


class ConfigError(ValueError):
    pass


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part)
    except ValueError as exc:
        raise ConfigError(f"expected comma separated integers, got {text!r}") from exc


def _rational_pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"expected 'x, y', got {text!r}")
    from .arithmetic import rational

    try:
        for p in parts:
            rational(p)
    except ValueError as exc:
        raise ConfigError(f"bad rational in {text!r}") from exc
    return parts[0], parts[1]


@dataclass
class RunConfig:
    curve: tuple[int, int, int] = (-1, -30, 81)
    generators: tuple[tuple[str, str], ...] = (("3", "-3"), ("-6", "3"), ("11", "31"))
    # base point coordinates as coefficients of 1, a, a^2 with a = 2^(1/3)
    base_x: tuple[int, ...] = (7, 2, 3)
    base_y: tuple[int, ...] = (-17, -15, -8)
    c4: str = "7e160"
    c5: str = "2.1"
    c6: str = "21.2"
    silverman: str = "7.846685"
    height_log_coeff: str = "3.044523"
    slope_convention: str = "consistent"
    precision: int = 120
    reduction_precision: int = 450
    oracle_v_min: int = -10_000
    oracle_v_max: int = 1_000_000
    output_format: str = "text"
    max_bound: Optional[int] = None
    threads: int = 1

    def validate(self) -> "RunConfig":
        if len(self.curve) != 3:
            raise ConfigError("curve needs exactly a2, a4, a6")
        if not self.generators:
            raise ConfigError("at least one generator is required")
        if self.slope_convention not in SLOPE_CONVENTIONS:
            raise ConfigError(f"slope must be one of {SLOPE_CONVENTIONS}")
        if self.precision < 10 or self.reduction_precision < 10:
            raise ConfigError("precision must be at least 10 digits")
        if self.oracle_v_min > self.oracle_v_max:
            raise ConfigError("oracle range is empty")
        if self.output_format not in ("text", "structured"):
            raise ConfigError("format must be 'text' or 'structured'")
        if self.max_bound is not None and self.max_bound < 1:
            raise ConfigError("max bound must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        for name in ("c4", "c5", "c6", "silverman", "height_log_coeff"):
            try:
                float(getattr(self, name))
            except ValueError as exc:
                raise ConfigError(f"{name} is not a number") from exc
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        parser = configparser.ConfigParser()
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        return cls.from_parser(parser)

    @classmethod
    def from_parser(cls, parser: configparser.ConfigParser) -> "RunConfig":
        cfg = cls()
        known = {
            "curve": {"a2", "a4", "a6"},
            "base_point": {"x", "y"},
            "constants": {"c4", "c5", "c6", "silverman", "height_log_coeff", "slope"},
            "precision": {"heights", "reduction"},
            "oracle": {"v_min", "v_max"},
            "run": {"format", "max_bound", "threads"},
        }
        for section in parser.sections():
            if section == "generators":
                continue
            if section not in known:
                raise ConfigError(f"unknown section [{section}]")
            unknown = set(parser[section]) - known[section]
            if unknown:
                raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
        try:
            if parser.has_section("curve"):
                s = parser["curve"]
                cfg.curve = (s.getint("a2", cfg.curve[0]), s.getint("a4", cfg.curve[1]),
                             s.getint("a6", cfg.curve[2]))
            if parser.has_section("generators"):
                cfg.generators = tuple(_rational_pair(v) for _, v in parser["generators"].items())
            if parser.has_section("base_point"):
                s = parser["base_point"]
                if "x" in s:
                    cfg.base_x = _int_tuple(s["x"])
                if "y" in s:
                    cfg.base_y = _int_tuple(s["y"])
            if parser.has_section("constants"):
                s = parser["constants"]
                for key in ("c4", "c5", "c6", "silverman", "height_log_coeff"):
                    if key in s:
                        setattr(cfg, key, s[key].strip())
                cfg.slope_convention = s.get("slope", cfg.slope_convention).strip()
            if parser.has_section("precision"):
                s = parser["precision"]
                cfg.precision = s.getint("heights", cfg.precision)
                cfg.reduction_precision = s.getint("reduction", cfg.reduction_precision)
            if parser.has_section("oracle"):
                s = parser["oracle"]
                cfg.oracle_v_min = s.getint("v_min", cfg.oracle_v_min)
                cfg.oracle_v_max = s.getint("v_max", cfg.oracle_v_max)
            if parser.has_section("run"):
                s = parser["run"]
                cfg.output_format = s.get("format", cfg.output_format).strip()
                if "max_bound" in s:
                    cfg.max_bound = s.getint("max_bound")
                cfg.threads = s.getint("threads", cfg.threads)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg.validate()

    def to_ini(self) -> str:
        lines = [
            "[curve]",
            f"a2 = {self.curve[0]}",
            f"a4 = {self.curve[1]}",
            f"a6 = {self.curve[2]}",
            "",
            "[generators]",
        ]
        lines += [f"p{i + 1} = {x}, {y}" for i, (x, y) in enumerate(self.generators)]
        lines += [
            "",
            "[base_point]",
            "x = " + ", ".join(map(str, self.base_x)),
            "y = " + ", ".join(map(str, self.base_y)),
            "",
            "[constants]",
            f"c4 = {self.c4}",
            f"c5 = {self.c5}",
            f"c6 = {self.c6}",
            f"silverman = {self.silverman}",
            f"height_log_coeff = {self.height_log_coeff}",
            f"slope = {self.slope_convention}",
            "",
            "[precision]",
            f"heights = {self.precision}",
            f"reduction = {self.reduction_precision}",
            "",
            "[oracle]",
            f"v_min = {self.oracle_v_min}",
            f"v_max = {self.oracle_v_max}",
            "",
            "[run]",
            f"format = {self.output_format}",
            f"threads = {self.threads}",
        ]
        if self.max_bound is not None:
            lines.append(f"max_bound = {self.max_bound}")
        return "\n".join(lines) + "\n"
