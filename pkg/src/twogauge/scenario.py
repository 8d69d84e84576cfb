"""Scenario files: one JSON document describing what a run should compute.

A scenario names a crossed module and whatever material the subcommands
need: chart forms, a path or bigon fixture, transition data, a nerve with
gluing values, and numeric parameters. Loading resolves and validates
everything up front and reports every problem found, not just the first.

Keys (all optional unless stated):

    description      free text shown in reports
    crossed_module   required; catalog name or inline {G, H, t, alpha} tables
    dim              chart dimension for forms and maps (default 2)
    forms            {"A": {"algebra": "base", "degree": 1, "components": {...}},
                      "B": {"algebra": "fiber", "degree": 2, ...}}
    path             shipped path fixture name
    bigon            shipped bigon fixture name
    transition       {"g": [exprs, one per base algebra direction],
                      "a": {components}, "perturb": factor (optional)}
    nerve            shipped nerve name or {charts, doubles, triples, quads}
    cocycle          {"g": {"i,j": value}, "h": {"i,j,k": value}, "k": {"i": value}}
    grid, samples, steps, seed, grids, tolerances
"""

import json
import os

from .cech import CoverNerve, GluingCocycle, nerve as nerve_fixture
from .crossed import crossed_module, from_tables
from .errors import ConfigError, GeometryError, GroupDomainError, ParseError, TwoGaugeError
from .forms import FormField
from .geometry import shipped_bigon, shipped_path
from .maps import ExpParamMap
from .transport import DEFAULT_GRID, DEFAULT_STEPS, TAU_FAKE
from .groups import TAU_GRP

DEFAULT_SAMPLES = 40
DEFAULT_TOLERANCES = {"group": TAU_GRP, "fake": TAU_FAKE,
                      "surface": 1e-4, "transition": 1e-9, "holonomy": 1e-6}
_KNOWN_KEYS = {"description", "crossed_module", "dim", "forms", "path",
               "bigon", "transition", "nerve", "cocycle", "grid", "samples",
               "steps", "seed", "grids", "tolerances"}


def _overlap_key(text):
    return tuple(int(part) for part in str(text).split(","))


class Scenario:
    """A loaded, fully resolved scenario."""

    def __init__(self, doc, name="<inline>"):
        self.name = name
        self.description = doc.get("description", "")
        self.doc = doc
        self.module = None
        self.dim = doc.get("dim", 2)
        self.forms = {}
        self.path = None
        self.bigon = None
        self.gmap = None
        self.a_form = None
        self.perturb = None
        self.nerve = None
        self.cocycle = None
        self.grid = doc.get("grid", DEFAULT_GRID)
        self.samples = doc.get("samples", DEFAULT_SAMPLES)
        self.steps = doc.get("steps", DEFAULT_STEPS)
        self.seed = doc.get("seed", 42)
        self.grids = doc.get("grids", [8, 16, 32, 64])
        self.tolerances = dict(DEFAULT_TOLERANCES)
        self.tolerances.update(doc.get("tolerances", {}))

    def to_dict(self):
        """Normalized document: defaults filled in, key order canonical."""
        out = {"crossed_module": self.doc.get("crossed_module"),
               "description": self.description, "dim": self.dim,
               "grid": self.grid, "samples": self.samples,
               "steps": self.steps, "seed": self.seed, "grids": self.grids,
               "tolerances": self.tolerances}
        for key in ("forms", "path", "bigon", "transition", "nerve", "cocycle"):
            if key in self.doc:
                out[key] = self.doc[key]
        return out

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()

    def require(self, *attrs):
        """The pieces a subcommand cannot run without."""
        missing = [a for a in attrs if getattr(self, a) is None and not
                   (a == "forms" and self.forms)]
        if missing:
            raise ConfigError([f"scenario {self.name} does not declare {m!r}"
                               for m in missing])

    def form(self, key):
        if key not in self.forms:
            raise ConfigError(f"scenario {self.name} declares no form {key!r}")
        return self.forms[key]


def _resolve(doc, name):
    scn = Scenario(doc, name)
    errors = []
    for key in doc:
        if key not in _KNOWN_KEYS:
            errors.append(f"unknown key {key!r}")

    if "crossed_module" not in doc:
        errors.append("missing crossed_module")
    else:
        spec = doc["crossed_module"]
        try:
            scn.module = from_tables(spec) if isinstance(spec, dict) \
                else crossed_module(spec)
        except (GroupDomainError, KeyError, TypeError, ValueError) as exc:
            errors.append(f"crossed_module: {exc}")

    if not (isinstance(scn.dim, int) and scn.dim >= 1):
        errors.append(f"dim must be a positive integer, got {scn.dim!r}")
    for field, kind in (("grid", scn.grid), ("samples", scn.samples),
                        ("steps", scn.steps)):
        if not (isinstance(kind, int) and kind >= 1):
            errors.append(f"{field} must be a positive integer, got {kind!r}")
    if not (isinstance(scn.seed, int) and 0 <= scn.seed < 2 ** 64):
        errors.append(f"seed must fit in 64 bits, got {scn.seed!r}")
    if not (isinstance(scn.grids, list) and scn.grids
            and all(isinstance(n, int) and n >= 2 for n in scn.grids)):
        errors.append(f"grids must be a list of integers >= 2, got {scn.grids!r}")
    for tname, tval in scn.tolerances.items():
        if tname not in DEFAULT_TOLERANCES:
            errors.append(f"unknown tolerance {tname!r}")
        elif not (isinstance(tval, (int, float)) and tval > 0):
            errors.append(f"tolerance {tname!r} must be positive")

    module_ok = scn.module is not None
    if module_ok and scn.module.is_finite and "forms" in doc:
        errors.append("forms need a matrix crossed module, "
                      f"{doc.get('crossed_module')} is finite")

    if "forms" in doc and module_ok and not scn.module.is_finite:
        algebras = {"base": scn.module.G.algebra, "fiber": scn.module.H.algebra}
        for fname, spec in doc["forms"].items():
            place = spec.get("algebra")
            if place not in algebras:
                errors.append(f"form {fname!r}: algebra must be 'base' or "
                              f"'fiber', got {place!r}")
                continue
            expected = {"A": "base", "B": "fiber"}.get(fname)
            if expected and place != expected:
                errors.append(f"form {fname!r} must take values in the "
                              f"{expected} algebra, got {place!r}")
                continue
            degree = spec.get("degree")
            if not (isinstance(degree, int) and 0 <= degree <= scn.dim):
                errors.append(f"form {fname!r}: degree must be an integer "
                              f"between 0 and dim={scn.dim}, got {degree!r}")
                continue
            try:
                scn.forms[fname] = FormField.from_config(
                    algebras[place], degree, scn.dim,
                    spec.get("components", {}))
            except (ConfigError, ParseError, ValueError) as exc:
                errors.append(f"form {fname!r}: {exc}")

    if "path" in doc:
        try:
            scn.path = shipped_path(doc["path"])
        except (GeometryError, TwoGaugeError) as exc:
            errors.append(f"path: {exc}")
    if "bigon" in doc:
        try:
            scn.bigon = shipped_bigon(doc["bigon"])
        except (GeometryError, TwoGaugeError) as exc:
            errors.append(f"bigon: {exc}")

    if "transition" in doc and module_ok:
        spec = doc["transition"]
        if scn.module.is_finite:
            errors.append("transition data needs a matrix crossed module")
        else:
            try:
                scn.gmap = ExpParamMap.from_exprs(scn.module.G, scn.dim,
                                                  spec["g"])
            except (KeyError, ParseError, ValueError, TwoGaugeError) as exc:
                errors.append(f"transition g: {exc}")
            try:
                scn.a_form = FormField.from_config(scn.module.H.algebra, 1,
                                                   scn.dim, spec.get("a", {}))
            except (ConfigError, ParseError, ValueError) as exc:
                errors.append(f"transition a: {exc}")
            scn.perturb = spec.get("perturb")
            if scn.perturb is not None and not isinstance(scn.perturb, (int, float)):
                errors.append("transition perturb must be a number")

    if "nerve" in doc:
        spec = doc["nerve"]
        try:
            if isinstance(spec, dict):
                scn.nerve = CoverNerve(spec["charts"],
                                       doubles=[tuple(d) for d in spec.get("doubles", [])],
                                       triples=[tuple(t) for t in spec.get("triples", [])],
                                       quads=[tuple(q) for q in spec.get("quads", [])])
            else:
                scn.nerve = nerve_fixture(spec)
        except (ConfigError, KeyError, TypeError) as exc:
            errors.append(f"nerve: {exc}")

    if "cocycle" in doc and module_ok and scn.nerve is not None:
        if scn.module.is_finite:
            spec = doc["cocycle"]
            try:
                g = {_overlap_key(k): v for k, v in spec.get("g", {}).items()}
                h = {_overlap_key(k): v for k, v in spec.get("h", {}).items()}
                k = {int(c): v for c, v in spec.get("k", {}).items()}
                scn.cocycle = GluingCocycle(scn.module, scn.nerve, g, h, k)
            except (ConfigError, ValueError) as exc:
                errors.append(f"cocycle: {exc}")
        else:
            errors.append("cocycle values in scenario files need a finite "
                          "crossed module")
    elif "cocycle" in doc and "nerve" not in doc:
        errors.append("cocycle data given without a nerve")

    if errors:
        raise ConfigError(errors)
    return scn


def scenario_dir():
    return os.path.join(os.path.dirname(__file__), "scenarios")


def find_scenario(path):
    """The given path, or the shipped scenario with that basename."""
    if os.path.exists(path):
        return path
    fallback = os.path.join(scenario_dir(), os.path.basename(path))
    if os.path.basename(path) == path and os.path.exists(fallback):
        return fallback
    raise ConfigError(f"scenario file not found: {path}")


def load_scenario(path):
    resolved = find_scenario(path)
    with open(resolved, "r", encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        doc = {}
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return _resolve(doc, os.path.basename(resolved))


def serialize_scenario(scn):
    """Canonical JSON text; load(serialize(s)) equals s."""
    return json.dumps(scn.to_dict(), sort_keys=True, indent=2) + "\n"


def scenario_from_dict(doc, name="<inline>"):
    return _resolve(dict(doc), name)


def shipped_scenarios():
    names = [f for f in os.listdir(scenario_dir()) if f.endswith(".scn")]
    return sorted(names)
