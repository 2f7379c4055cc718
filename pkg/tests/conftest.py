"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from albench.environments import make_gaussian_env
from albench.metrics import RunRecord


@pytest.fixture
def sample_config(tmp_path):
    """Create a small Gaussian experiment configuration file."""
    config_file = tmp_path / "albench.conf"
    config_file.write_text(
        f"""[experiment]
horizon=40
seeds=0,1
rank=2
ndcg_cutoff=3
output_dir={tmp_path / "results"}
outputs=csv,metadata

[environment]
kind=gaussian
users=6
items=8
rank=2
noise=0.1

[policy]
name=alb
lambda=0.1
sigma=0.5
delta=0.01
s=1
"""
    )
    return config_file


@pytest.fixture
def movielens_file(tmp_path):
    """Create a small MovieLens u.data file."""
    data = tmp_path / "u.data"
    data.write_text(
        "196\t242\t3\t881250949\n"
        "186\t302\t3\t891717742\n"
        "22\t377\t1\t878887116\n"
        "196\t302\t4\t881250950\n"
        "186\t242\t5\t891717743\n"
        "196\t242\t5\t881250999\n"
        "22\t242\t2\t878887117\n"
    )
    return data


@pytest.fixture
def bookcrossing_file(tmp_path):
    """Create a small Book-Crossing ratings file (latin-1)."""
    data = tmp_path / "BX-Book-Ratings.csv"
    data.write_bytes(
        (
            '"User-ID";"ISBN";"Book-Rating"\n'
            '"276725";"034545104X";"0"\n'
            '"276726";"0155061224";"5"\n'
            '"276727";"0446520802";"0"\n'
            '"276729";"052165615X";"3"\n'
            '"276729";"0521795028";"6"\n'
            '"276733";"2080674722";"8"\n'
            '"276744";"038550120X";"7"\n'
            '"276745";"342310538\xe9";"10"\n'
        ).encode("latin-1")
    )
    return data


@pytest.fixture
def jester_file(tmp_path):
    """Create a small Jester matrix with four jokes."""
    data = tmp_path / "jester-data-1.csv"
    data.write_text(
        "3,-7.82,8.79,-9.66,99\n"
        "0,99,99,99,99\n"
        "4,4.08,-0.29,6.36,4.37\n"
        "2,99,99,9.03,9.27\n"
    )
    return data


@pytest.fixture
def small_env():
    """Gaussian 5x7 rank-2 environment with fixed seed."""
    return make_gaussian_env(5, 7, 2, 1.0, 1.0, 0.1, np.random.default_rng(3))


@pytest.fixture
def make_record():
    """Factory for run records with a given final regret."""

    def factory(seed=0, regrets=(1.0, 0.5), policy="alb", ndcg=None):
        regret = np.asarray(regrets, dtype=float)
        steps = regret.shape[0]
        return RunRecord(
            run_id=f"{policy}-s{seed}",
            policy=policy,
            seed=seed,
            t=np.arange(1, steps + 1),
            user=np.zeros(steps, dtype=np.int64),
            item=np.zeros(steps, dtype=np.int64),
            rating=np.ones(steps),
            regret=regret,
            ndcg=np.full(steps, 1.0) if ndcg is None else np.asarray(ndcg),
        )

    return factory
