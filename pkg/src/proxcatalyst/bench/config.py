"""Flat key=value experiment configs.

Format: one ``key = value`` per line, ``#`` starts a comment, blank
lines ignored.  Unknown keys, duplicates, missing required keys, and
type errors are all collected and reported together with line numbers
where possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ConfigError(Exception):
    pass


def parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    errors = []
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        if not sep:
            errors.append("line %d: expected key = value, got %r" % (lineno, body))
            continue
        key = key.strip()
        value = value.strip()
        if not key:
            errors.append("line %d: empty key" % lineno)
            continue
        if key in out:
            errors.append("line %d: duplicate key %r (first on line %d)"
                          % (lineno, key, lines[key]))
            continue
        out[key] = value
        lines[key] = lineno
    if errors:
        raise ConfigError("; ".join(errors))
    return out


PROBLEMS = ("quadratic", "logistic", "dictionary", "twolayer")
METHODS = ("gd", "svrg", "saga")
WRAPPERS = ("none-convex", "none-nonconvex", "catalyst-basic", "catalyst-auto")

# keys that identify the problem instance; `compare` requires them equal
PROBLEM_KEYS = ("problem", "seed", "n", "p", "cond", "l1", "l2", "rho",
                "lipschitz", "ball", "data", "patch_m", "atoms", "hidden")

_SCHEMA = {
    # key: (type, required, default)
    "problem": (str, True, None),
    "method": (str, True, None),
    "wrapper": (str, True, None),
    "budget": (int, True, None),
    "out": (str, False, None),
    "seed": (int, False, 0),
    "epsilon": (float, False, 0.0),
    # problem parameters
    "n": (int, False, None),
    "p": (int, False, None),
    "cond": (float, False, None),
    "l1": (float, False, 0.0),
    "l2": (float, False, 0.0),
    "rho": (float, False, None),
    "lipschitz": (float, False, None),
    "ball": (float, False, None),
    "data": (str, False, None),
    "patch_m": (int, False, 16),
    "atoms": (int, False, 8),
    "hidden": (int, False, 4),
    # catalyst overrides
    "kappa0": (float, False, None),
    "kappa_cvx": (float, False, None),
    "t_budget": (int, False, None),
    "s_budget": (int, False, None),
    "logk": (bool, False, False),
    "lazy_prox": (bool, False, False),
    "max_doublings": (int, False, 60),
}


def _coerce(key, raw, typ):
    if typ is str:
        return raw
    if typ is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError
    return typ(raw)


@dataclass(frozen=True)
class ExperimentConfig:
    values: dict = field(default_factory=dict)

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def problem_fingerprint(self) -> tuple:
        return tuple((k, self.values.get(k)) for k in PROBLEM_KEYS)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        vals = dict(self.values)
        vals.update({k: v for k, v in kw.items() if v is not None})
        return ExperimentConfig(vals)


def config_from_mapping(raw: dict[str, str]) -> ExperimentConfig:
    errors = []
    vals: dict = {}
    for key, value in raw.items():
        if key not in _SCHEMA:
            errors.append("unknown key %r" % key)
    for key, (typ, required, default) in _SCHEMA.items():
        if key in raw:
            try:
                vals[key] = _coerce(key, raw[key], typ)
            except ValueError:
                errors.append("key %r: cannot parse %r as %s"
                              % (key, raw[key], typ.__name__))
        elif required:
            errors.append("missing required key %r" % key)
        else:
            vals[key] = default
    if not errors:
        if vals["problem"] not in PROBLEMS:
            errors.append("problem must be one of %s" % (PROBLEMS,))
        if vals["method"] not in METHODS:
            errors.append("method must be one of %s" % (METHODS,))
        if vals["wrapper"] not in WRAPPERS:
            errors.append("wrapper must be one of %s" % (WRAPPERS,))
        if vals["budget"] < 0:
            errors.append("budget must be nonnegative")
    if errors:
        raise ConfigError("; ".join(errors))
    return ExperimentConfig(vals)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc)) from exc
    try:
        return config_from_mapping(parse_kv(text))
    except ConfigError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from None
