"""Synthetic population generator for experiments.

Everything is drawn from one seeded RNG and arc timestamps are logical
counters, so a given (size, density, spec, seed) quadruple always produces
the same store bytes.

The distribution spec is a small text format::

    gender_ratio 0.5
    age 0..10 1.0
    age 19..60 2.0
    pref 0 0.3
    pref 3 0.2

``gender_ratio`` is the probability of gender code 1; ``age`` lines are
weighted buckets; ``pref`` lines give the inclusion probability of one
activity-preference code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import ArcKind, Node
from .profiles import DeviceProfile, ScreenClass, UserProfile
from .store import Store

NAME_POOL = ("Ana", "Juan", "Mery", "Luis", "Sofia",
             "Carlos", "Rosa", "Pedro", "Elena", "Diego")

DEVICE_TEMPLATES = (
    ("tv", ScreenClass.TV, True, 6, 4096),
    ("mobile", ScreenClass.MOBILE, False, 4, 1024),
    ("desktop", ScreenClass.DESKTOP, True, 10, 65536),
)


class PopulationSpecError(ValueError):
    pass


@dataclass(frozen=True)
class PopulationSpec:
    gender_ratio: float = 0.5
    age_buckets: tuple[tuple[int, int, float], ...] = (
        (0, 10, 1.0), (11, 18, 1.0), (19, 60, 2.0), (61, 90, 0.5))
    pref_probs: tuple[tuple[int, float], ...] = ((0, 0.3), (1, 0.3), (3, 0.3))

    def __post_init__(self) -> None:
        if not 0.0 <= self.gender_ratio <= 1.0:
            raise PopulationSpecError(f"gender_ratio outside [0,1]: {self.gender_ratio}")
        if not self.age_buckets:
            raise PopulationSpecError("no age buckets")
        for lo, hi, weight in self.age_buckets:
            if lo < 0 or hi < lo or weight < 0:
                raise PopulationSpecError(f"bad age bucket: {lo}..{hi} {weight}")


def parse_population_spec(text: str) -> PopulationSpec:
    gender_ratio = 0.5
    buckets: list[tuple[int, int, float]] = []
    prefs: list[tuple[int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "gender_ratio" and len(parts) == 2:
                gender_ratio = float(parts[1])
            elif parts[0] == "age" and len(parts) == 3:
                lo, hi = parts[1].split("..")
                buckets.append((int(lo), int(hi), float(parts[2])))
            elif parts[0] == "pref" and len(parts) == 3:
                prefs.append((int(parts[1]), float(parts[2])))
            else:
                raise ValueError("unknown directive")
        except ValueError as e:
            raise PopulationSpecError(f"bad spec line {lineno}: {raw!r} ({e})") from None
    return PopulationSpec(
        gender_ratio=gender_ratio,
        age_buckets=tuple(buckets) or PopulationSpec.age_buckets,
        pref_probs=tuple(prefs) if prefs else PopulationSpec.pref_probs,
    )


def _display_name(i: int) -> str:
    base = NAME_POOL[i % len(NAME_POOL)]
    return base if i < len(NAME_POOL) else f"{base} {i // len(NAME_POOL)}"


def seed_population(store: Store, size: int, density: float,
                    spec: PopulationSpec | None = None,
                    rng_seed: int = 0) -> None:
    """Fill a store with a reproducible population.

    density is the independent probability of a friendship arc between any
    pair of users; 1.0 yields the complete graph.
    """
    if size < 1:
        raise ValueError(f"size below 1: {size}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density outside [0,1]: {density}")
    spec = spec or PopulationSpec()
    rng = random.Random(rng_seed)

    weights = [w for _, _, w in spec.age_buckets]
    for i in range(size):
        n = i + 1
        kind, screen, images, items, payload = DEVICE_TEMPLATES[i % len(DEVICE_TEMPLATES)]
        device = DeviceProfile(f"d{n:04d}", screen, images, items, payload)
        store.put_device(device)
        lo, hi, _ = rng.choices(spec.age_buckets, weights=weights)[0]
        prefs = frozenset(code for code, p in spec.pref_probs if rng.random() < p)
        user = UserProfile(
            user_id=f"u{n:04d}",
            name=_display_name(i),
            gender_code=1 if rng.random() < spec.gender_ratio else 0,
            age=rng.randint(lo, hi),
            activity_prefs=prefs,
            photo_ref=f"photo://u{n:04d}" if rng.random() < 0.5 else None,
        )
        store.put_user(user, secret=f"{rng.getrandbits(64):016x}")
        store.add_node(Node(f"n{n:04d}", user.user_id, device.device_id))

    clock = 0.0
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            if rng.random() < density:
                store.add_interaction(ArcKind.USER_USER, f"n{i:04d}", f"n{j:04d}",
                                      created_at=clock)
                clock += 1.0
