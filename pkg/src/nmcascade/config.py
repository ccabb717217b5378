"""Flat key=value configuration with section prefixes.

Example file::

    # high-Q cavity defaults
    reservoir.gamma = 1.0
    reservoir.omega_coupling = 1.0
    reservoir.topology = single
    grid.n = 150
    grid.halfwidth = 30.0
    time.t_max = 10.0

Any key can also be overridden on the command line with
``--set section.key=value``. Defaults reproduce the canonical strongly
coupled cavity case (Gamma = Omega = 1, 150-point grid over +/-30).
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .inversion import InversionConfig, InversionMethod
from .kernel import FrequencyGrid
from .pseudomode import PseudomodeParams
from .reservoir import AtomParams, LorentzianProfile, ReservoirSpec, Topology

_METHODS = {
    "bromwich": InversionMethod.BROMWICH_FOURIER,
    "bromwich-fourier": InversionMethod.BROMWICH_FOURIER,
    "stehfest": InversionMethod.GAVER_STEHFEST,
    "gaver-stehfest": InversionMethod.GAVER_STEHFEST,
}

_TOPOLOGIES = {
    "single": Topology.SINGLE,
    "two-res": Topology.TWO_RESERVOIRS,
    "two-reservoirs": Topology.TWO_RESERVOIRS,
}


@dataclass
class SimulationConfig:
    """All tunables of a run, keyed as section.name in files and overrides.

    The absolute line center ``omega0`` only fixes the frequency origin; the
    dynamics depends on the detunings ``delta1``/``delta2`` of the two atomic
    transitions from it (the library is validated on resonance,
    delta1 = delta2 = 0).
    """

    gamma: float = 1.0            # reservoir.gamma: linewidth Gamma
    omega_coupling: float = 1.0   # reservoir.omega_coupling: strength Omega
    omega0: float = 100.0         # reservoir.omega0: line center (origin only)
    alpha: float = 1.0            # reservoir.alpha: coupling ratio
    topology: str = "single"      # reservoir.topology: single | two-res
    delta1: float = 0.0           # atom.delta1: omega1 - omega0
    delta2: float = 0.0           # atom.delta2: omega2 - omega0
    n_grid: int = 150             # grid.n
    halfwidth: float = 30.0       # grid.halfwidth
    method: str = "bromwich"      # inversion.method
    sigma: float = 0.0            # inversion.sigma: abscissa floor, 0 = auto
    terms: int = 24               # inversion.terms
    t_max: float = 10.0           # time.t_max
    n_time: int = 200             # time.n_time
    fock_cutoff: int = 2          # pseudomode.fock_cutoff
    precision: int = 12           # output.precision: significant digits in CSV

    def __post_init__(self):
        if self.topology not in _TOPOLOGIES:
            raise ConfigError(f"unknown topology '{self.topology}' (use single | two-res)")
        if self.method not in _METHODS:
            raise ConfigError(f"unknown inversion method '{self.method}'")
        if self.n_grid < 2:
            raise ConfigError("grid.n must be at least 2")
        if self.halfwidth <= 0:
            raise ConfigError("grid.halfwidth must be positive")
        if not 1 <= self.precision <= 17:
            raise ConfigError("output.precision must be in 1..17")

    # -- structured views ---------------------------------------------------

    def reservoir_spec(self) -> ReservoirSpec:
        profile = LorentzianProfile(gamma=self.gamma, omega_big=self.omega_coupling,
                                    omega0=self.omega0)
        return ReservoirSpec(r1=profile, r2=profile, alpha=self.alpha,
                             topology=_TOPOLOGIES[self.topology])

    def atom_params(self) -> AtomParams:
        return AtomParams(omega1=self.omega0 + self.delta1, omega2=self.omega0 + self.delta2)

    def frequency_grid(self, n: int | None = None) -> FrequencyGrid:
        return FrequencyGrid.uniform(center=self.omega0, halfwidth=self.halfwidth,
                                     n=self.n_grid if n is None else n)

    def inversion_config(self) -> InversionConfig:
        return InversionConfig(
            method=_METHODS[self.method],
            sigma=self.sigma if self.sigma > 0 else None,
            terms=self.terms, t_max=self.t_max, n_time=self.n_time,
        )

    def pseudomode_params(self) -> PseudomodeParams:
        return PseudomodeParams(omega_big=self.omega_coupling, gamma=self.gamma,
                                n_max=self.fock_cutoff)


_KEYMAP = {
    "reservoir.gamma": "gamma",
    "reservoir.omega_coupling": "omega_coupling",
    "reservoir.omega0": "omega0",
    "reservoir.alpha": "alpha",
    "reservoir.topology": "topology",
    "atom.delta1": "delta1",
    "atom.delta2": "delta2",
    "grid.n": "n_grid",
    "grid.halfwidth": "halfwidth",
    "inversion.method": "method",
    "inversion.sigma": "sigma",
    "inversion.terms": "terms",
    "time.t_max": "t_max",
    "time.n_time": "n_time",
    "pseudomode.fock_cutoff": "fock_cutoff",
    "output.precision": "precision",
}

_FIELD_TYPES = {f.name: f.type for f in fields(SimulationConfig)}


def _coerce(field_name: str, raw: str):
    kind = _FIELD_TYPES[field_name]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"cannot parse '{raw}' for {field_name}: {exc}") from exc


def parse_assignments(lines, source: str = "<config>") -> dict:
    """Parse ``section.key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYMAP:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'")
        field_name = _KEYMAP[key]
        out[field_name] = _coerce(field_name, raw)
    return out


def load_config(path: str | Path | None = None, overrides: list[str] | None = None) -> SimulationConfig:
    """Build a config from an optional file plus --set overrides."""
    values: dict = {}
    if path is not None:
        text = Path(path).read_text()
        values.update(parse_assignments(text.splitlines(), source=str(path)))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override '{item}' must look like section.key=value")
        values.update(parse_assignments([item], source="--set"))
    return SimulationConfig(**values)


def dump_config(cfg: SimulationConfig) -> str:
    """Render a config back to the flat key=value format."""
    inverse = {v: k for k, v in _KEYMAP.items()}
    lines = [f"{inverse[f.name]} = {getattr(cfg, f.name)}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"
