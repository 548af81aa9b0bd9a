"""Synthetic planted-partition corpora for desk-scale validation.

Nodes are split into equal communities. For every year in the window, each
intra-community pair collaborates with probability p_in and each
cross-community pair with probability p_out, drawn independently per year.
So communities shape the graph in every window, and pairs that first
collaborate late in the window provide genuinely new links for temporal
splits.

Profiles are drawn independently of the graph. Research indices come from 8
archetype profiles: one value per index per archetype is drawn once

  pc  ~ Poisson(12)        cn ~ Poisson(40)        hi ~ Poisson(6)
  pi  ~ Gamma(2, scale=3)  upi ~ Gamma(2, scale=1.5)

and every author is assigned a uniform archetype. Authors sharing an
archetype are indistinguishable on indices, so index sums carry no label
signal by construction, not even through author identity. Affiliations come
from one shared institution pool, also community-independent. Research interests
are the controllable family: with ``interest_alignment="community"`` each
author samples words from a community-specific vocabulary, making interest
similarity informative; with ``"random"`` the words come from the pooled
vocabulary of all communities, erasing the signal while keeping the same
text statistics. The same seed produces the same edge set under either
alignment; only the interest texts differ.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import AuthorProfile, EdgeTable
from .graph import YearWindow


@dataclass(frozen=True)
class SynthParams:
    communities: int = 4
    nodes_per_community: int = 50
    p_in: float = 0.15
    p_out: float = 0.005
    years: YearWindow = YearWindow(2000, 2005)
    interest_vocab_per_community: int = 25
    interest_alignment: str = "community"

    def __post_init__(self):
        if self.communities < 1 or self.nodes_per_community < 1:
            raise ValueError("need at least one community and one node")
        if not (0.0 <= self.p_out <= 1.0 and 0.0 <= self.p_in <= 1.0):
            raise ValueError("probabilities must be in [0, 1]")
        if self.p_in <= self.p_out:
            raise ValueError("p_in must exceed p_out")
        if self.interest_vocab_per_community < 1:
            raise ValueError("interest vocabulary must be non-empty")
        if self.interest_alignment not in ("community", "random"):
            raise ValueError('interest_alignment must be "community" or "random"')


_N_INSTITUTIONS = 20
_N_ARCHETYPES = 8
_WORDS_PER_INTEREST = (4, 9)  # inclusive low, exclusive high
_WORDS_PER_AFFILIATION = 2


def generate_synthetic(
    params: SynthParams, seed: int
) -> tuple[EdgeTable, dict[int, AuthorProfile]]:
    """Seeded corpus: temporal edge table plus author profiles."""
    rng = np.random.default_rng(seed)
    n_total = params.communities * params.nodes_per_community
    community = np.arange(n_total, dtype=np.int64) // params.nodes_per_community

    pair_u, pair_v = np.triu_indices(n_total, k=1)
    pair_u = pair_u.astype(np.int64)
    pair_v = pair_v.astype(np.int64)
    intra = community[pair_u] == community[pair_v]
    p_pair = np.where(intra, params.p_in, params.p_out)

    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    for year in range(params.years.start, params.years.end + 1):
        hit = rng.random(len(pair_u)) < p_pair
        us.append(pair_u[hit])
        vs.append(pair_v[hit])
        ys.append(np.full(int(hit.sum()), year, dtype=np.int64))
    edges = EdgeTable(
        u=np.concatenate(us), v=np.concatenate(vs), year=np.concatenate(ys)
    )

    pool_pc = rng.poisson(12, _N_ARCHETYPES)
    pool_cn = rng.poisson(40, _N_ARCHETYPES)
    pool_hi = rng.poisson(6, _N_ARCHETYPES)
    pool_pi = rng.gamma(2.0, 3.0, _N_ARCHETYPES)
    pool_upi = rng.gamma(2.0, 1.5, _N_ARCHETYPES)
    archetype = rng.integers(0, _N_ARCHETYPES, size=n_total)
    pc = pool_pc[archetype]
    cn = pool_cn[archetype]
    hi = pool_hi[archetype]
    pi = pool_pi[archetype]
    upi = pool_upi[archetype]

    inst = rng.integers(0, _N_INSTITUTIONS, size=(n_total, _WORDS_PER_AFFILIATION))

    vocab_size = params.interest_vocab_per_community
    n_words = rng.integers(
        _WORDS_PER_INTEREST[0], _WORDS_PER_INTEREST[1], size=n_total
    )
    profiles: dict[int, AuthorProfile] = {}
    for i in range(n_total):
        if params.interest_alignment == "community":
            base = int(community[i]) * vocab_size
            word_ids = base + rng.integers(0, vocab_size, size=int(n_words[i]))
        else:
            word_ids = rng.integers(
                0, params.communities * vocab_size, size=int(n_words[i])
            )
        interests = " ".join(f"topic{w:04d}" for w in word_ids)
        affiliation = " ".join(f"inst{j:02d}" for j in inst[i])
        profiles[i] = AuthorProfile(
            id=i,
            name=f"author{i:05d}",
            affiliation=affiliation,
            interests=interests,
            pc=int(pc[i]),
            cn=int(cn[i]),
            hi=int(hi[i]),
            pi=float(pi[i]),
            upi=float(upi[i]),
        )
    return edges, profiles
