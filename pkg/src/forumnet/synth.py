"""Synthetic forum datasets with controllable participation skew.

The generator plants the structures the analysis pipeline should find:
a preferentially-attached core of heavy posters (tunable via
``skew_alpha``), boosted moderators, and silent initiators whose threads
never attract anybody else. Everything is driven by one sequential
seeded random stream, so a config is a complete recipe for its dataset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import ConfigError
from .ingest import ForumDataset, PostRecord, UserProfile

DEFAULT_WINDOW_START = datetime(2009, 1, 1, tzinfo=timezone.utc)
DEFAULT_WINDOW_END = datetime(2014, 12, 31, 23, 59, 59, tzinfo=timezone.utc)
DEFAULT_PROFESSIONS = ("general_practice", "nursing", "cardiology", "general_medicine")
PROFESSION_WEIGHTS = (8, 2, 1, 1)


@dataclass(frozen=True)
class SynthConfig:
    user_count: int
    thread_count: int
    post_count: int
    skew_alpha: float = 1.0
    forum_count: int = 3
    moderator_count: int = 0
    silent_initiator_count: int = 0
    seed: int = 0
    # plumbing knobs; defaults keep the short constructor usable
    threads_per_silent_initiator: int = 25
    moderator_boost: float = 10.0
    window_start: datetime = DEFAULT_WINDOW_START
    window_end: datetime = DEFAULT_WINDOW_END

    def validate(self) -> None:
        if self.user_count < 1 or self.thread_count < 1 or self.forum_count < 1:
            raise ConfigError("user, thread, and forum counts must all be >= 1")
        if self.skew_alpha <= 0:
            raise ConfigError("skew_alpha must be > 0")
        if self.post_count < self.thread_count:
            raise ConfigError("post_count must cover one starting post per thread")
        if self.moderator_count < 0 or self.silent_initiator_count < 0:
            raise ConfigError("role counts must be >= 0")
        if self.moderator_count + self.silent_initiator_count > self.user_count:
            raise ConfigError("moderators plus silent initiators exceed user_count")
        if self.threads_per_silent_initiator < 1:
            raise ConfigError("threads_per_silent_initiator must be >= 1")
        silent_threads = self.silent_initiator_count * self.threads_per_silent_initiator
        if silent_threads > self.thread_count:
            raise ConfigError("silent initiators need more threads than the config has")
        regular_threads = self.thread_count - silent_threads
        if regular_threads == 0 and self.post_count > self.thread_count:
            raise ConfigError("no regular threads left to hold reply posts")
        if regular_threads > 0 and self.silent_initiator_count == self.user_count:
            raise ConfigError("regular threads need at least one non-silent user")
        if self.window_end <= self.window_start:
            raise ConfigError("time window is empty")


@dataclass(frozen=True)
class PlantedStructure:
    """Ids the generator assigned to special roles, derivable from config."""

    moderators: tuple[str, ...]
    silent_initiators: tuple[str, ...]


def _ids(prefix: str, count: int) -> list[str]:
    width = max(4, len(str(count)))
    return [f"{prefix}{i:0{width}d}" for i in range(1, count + 1)]


def planted_structure(cfg: SynthConfig) -> PlantedStructure:
    cfg.validate()
    users = _ids("u", cfg.user_count)
    moderators = tuple(users[: cfg.moderator_count])
    silent = tuple(users[cfg.moderator_count : cfg.moderator_count + cfg.silent_initiator_count])
    return PlantedStructure(moderators=moderators, silent_initiators=silent)


class _PreferentialPicker:
    """Weighted draw over users with weight (posts + 1 + boost)^alpha.

    Weights update as posts accumulate, so early winners keep winning;
    the +1 smoothing lets idle users enter at all.
    """

    def __init__(self, users, alpha, boosts, rng):
        self.users = users
        self.alpha = alpha
        self.boosts = boosts
        self.rng = rng
        self.counts = [0] * len(users)
        self.weights = [(1.0 + boosts[i]) ** alpha for i in range(len(users))]
        self.total = sum(self.weights)

    def record(self, index: int) -> None:
        self.counts[index] += 1
        new_weight = (self.counts[index] + 1.0 + self.boosts[index]) ** self.alpha
        self.total += new_weight - self.weights[index]
        self.weights[index] = new_weight

    def pick(self) -> int:
        target = self.rng.random() * self.total
        acc = 0.0
        for i, w in enumerate(self.weights):
            acc += w
            if target < acc:
                self.record(i)
                return i
        last = len(self.weights) - 1  # float round-off fallback
        self.record(last)
        return last


def generate(cfg: SynthConfig) -> ForumDataset:
    """Build a dataset per the config; deterministic for a given seed.

    Every thread gets a starting post. Every non-silent user posts at
    least once (budget permitting, in id order) so the configured user
    count is the posting population. Remaining posts go to uniformly
    chosen regular threads with preferentially attached authors. Silent
    initiators only ever start their own threads and nobody joins them.
    """
    cfg.validate()
    rng = random.Random(cfg.seed)

    users = _ids("u", cfg.user_count)
    threads = _ids("t", cfg.thread_count)
    forums = _ids("f", cfg.forum_count)
    planted = planted_structure(cfg)
    silent_set = set(planted.silent_initiators)

    silent_thread_total = cfg.silent_initiator_count * cfg.threads_per_silent_initiator
    regular_threads = threads[: cfg.thread_count - silent_thread_total]
    silent_threads = threads[cfg.thread_count - silent_thread_total :]

    regular_users = [u for u in users if u not in silent_set]
    boosts = [cfg.moderator_boost if u in planted.moderators else 0.0 for u in regular_users]
    picker = _PreferentialPicker(regular_users, cfg.skew_alpha, boosts, rng)

    thread_forum = {t: forums[rng.randrange(len(forums))] for t in threads}
    start_epoch = int(cfg.window_start.timestamp())
    end_epoch = int(cfg.window_end.timestamp())

    posts: list[PostRecord] = []
    thread_started_at: dict[str, int] = {}

    def add_post(user: str, thread: str, is_start: bool) -> None:
        if is_start:
            ts = rng.randrange(start_epoch, end_epoch)
            thread_started_at[thread] = ts
        else:
            ts = rng.randrange(thread_started_at[thread] + 1, end_epoch + 1)
        posts.append(
            PostRecord(
                post_id=f"p{len(posts) + 1:06d}",
                thread_id=thread,
                user_id=user,
                forum_id=thread_forum[thread],
                timestamp=datetime.fromtimestamp(ts, tz=timezone.utc),
                is_thread_start=is_start,
            )
        )

    # silent initiators start their private threads, one post each
    for i, user in enumerate(planted.silent_initiators):
        begin = i * cfg.threads_per_silent_initiator
        for thread in silent_threads[begin : begin + cfg.threads_per_silent_initiator]:
            add_post(user, thread, is_start=True)

    for thread in regular_threads:
        add_post(regular_users[picker.pick()], thread, is_start=True)

    budget = cfg.post_count - len(posts)

    # best-effort coverage: idle users get one post each while budget lasts
    if regular_threads:
        for i, user in enumerate(regular_users):
            if budget == 0:
                break
            if picker.counts[i] == 0:
                picker.record(i)
                add_post(user, regular_threads[rng.randrange(len(regular_threads))], False)
                budget -= 1

    for _ in range(budget):
        thread = regular_threads[rng.randrange(len(regular_threads))]
        add_post(regular_users[picker.pick()], thread, False)

    profiles = [
        UserProfile(u, rng.choices(DEFAULT_PROFESSIONS, weights=PROFESSION_WEIGHTS)[0])
        for u in users
    ]
    posts.sort(key=lambda p: (p.timestamp, p.post_id))
    return ForumDataset(posts=posts, users=profiles, rejected=[])
