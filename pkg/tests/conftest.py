from __future__ import annotations

import numpy as np
import pytest

import betalike as bl

DISEASES = [
    ("headache", 2),
    ("epilepsy", 3),
    ("brain tumors", 3),
    ("anemia", 3),
    ("angina", 4),
    ("heart murmur", 4),
]

DISEASE_HIERARCHY = {
    "name": "any illness",
    "children": [
        {"name": "nervous", "children": ["headache", "epilepsy", "brain tumors"]},
        {"name": "circulatory", "children": ["heart murmur", "angina"]},
        {"name": "blood", "children": ["anemia"]},
    ],
}


def patient_schema() -> bl.DatasetSchema:
    return bl.DatasetSchema(
        (
            bl.Attribute("weight", "qi", "numeric", lo=40, hi=90),
            bl.Attribute("age", "qi", "numeric", lo=20, hi=80),
            bl.Attribute("disease", "sa"),
        )
    )


def disease_table(counts=DISEASES, seed: int = 3) -> bl.Table:
    """Nineteen patient rows with the disease counts 2,3,3,3,4,4."""
    rng = np.random.default_rng(seed)
    rows = []
    for name, c in counts:
        for _ in range(c):
            rows.append(
                {
                    "weight": int(rng.integers(40, 91)),
                    "age": int(rng.integers(20, 81)),
                    "disease": name,
                }
            )
    return bl.table_from_rows(patient_schema(), rows)


def table1() -> bl.Table:
    """The six-patient table: one disease each, fixed QI values."""
    rows = [
        {"weight": 70, "age": 40, "disease": "headache"},
        {"weight": 60, "age": 60, "disease": "epilepsy"},
        {"weight": 50, "age": 50, "disease": "brain tumors"},
        {"weight": 70, "age": 50, "disease": "heart murmur"},
        {"weight": 80, "age": 50, "disease": "anemia"},
        {"weight": 60, "age": 70, "disease": "angina"},
    ]
    return bl.table_from_rows(patient_schema(), rows)


@pytest.fixture(scope="session")
def example2():
    return disease_table()


@pytest.fixture(scope="session")
def census_table():
    return bl.generate_synthetic(100_000, 50, seed=0, sa_freqs=bl.census_like_profile(50))


@pytest.fixture(scope="session")
def census_release_b4(census_table):
    return bl.generalize(census_table, 4.0, seed=1)
