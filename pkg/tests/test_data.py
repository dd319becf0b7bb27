from __future__ import annotations

import numpy as np
import pytest

import betalike as bl

from conftest import patient_schema, table1


def _write_csv(path, rows, header="weight,age,disease"):
    path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")


TABLE1_ROWS = [
    "70,40,headache",
    "60,60,epilepsy",
    "50,50,brain tumors",
    "70,50,heart murmur",
    "80,50,anemia",
    "60,70,angina",
]


def test_load_table_mirrors_patient_records(tmp_path):
    f = tmp_path / "t1.csv"
    _write_csv(f, TABLE1_ROWS)
    t = bl.load_table(f, patient_schema())
    assert t.n_rows == 6
    assert t.m == 6
    assert t.qi_row(0) == (70.0, 40.0)


def test_load_empty_data_section(tmp_path):
    f = tmp_path / "empty.csv"
    f.write_text("weight,age,disease\n", encoding="utf-8")
    with pytest.raises(bl.DataError, match="no rows"):
        bl.load_table(f, patient_schema())


def test_load_value_outside_domain_names_row_and_attribute(tmp_path):
    f = tmp_path / "bad.csv"
    _write_csv(f, ["70,40,headache", "60,200,epilepsy"])
    with pytest.raises(bl.DataError, match=r"row 2.*age"):
        bl.load_table(f, patient_schema())


def test_load_unparsable_value(tmp_path):
    f = tmp_path / "bad.csv"
    _write_csv(f, ["seventy,40,headache"])
    with pytest.raises(bl.DataError, match=r"row 1.*weight"):
        bl.load_table(f, patient_schema())


def test_load_missing_column(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("weight,age\n70,40\n", encoding="utf-8")
    with pytest.raises(bl.DataError, match="missing column"):
        bl.load_table(f, patient_schema())


def test_load_unknown_header_column(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("weight,age,disease,zip\n70,40,headache,111\n", encoding="utf-8")
    with pytest.raises(bl.DataError, match="unexpected column"):
        bl.load_table(f, patient_schema())


def test_unknown_categorical_leaf(tmp_path):
    schema = bl.DatasetSchema((
        bl.Attribute("color", "qi", "categorical", hierarchy=bl.Hierarchy({"name": "c", "children": ["red", "blue"]})),
        bl.Attribute("kind", "sa"),
    ))
    f = tmp_path / "bad.csv"
    f.write_text("color,kind\ngreen,a\n", encoding="utf-8")
    with pytest.raises(bl.DataError, match=r"row 1.*green"):
        bl.load_table(f, schema)


def test_save_load_round_trip(tmp_path, example2):
    f = tmp_path / "round.csv"
    bl.save_table(example2, f)
    again = bl.load_table(f, example2.schema)
    assert again.sa_values == example2.sa_values
    assert (again.sa_codes == example2.sa_codes).all()
    for a, b in zip(again.qi_columns, example2.qi_columns):
        assert (a == b).all()


def test_sa_distribution_table1_uniform():
    dist = bl.sa_distribution(table1())
    assert dist.counts == (1,) * 6
    assert np.allclose(dist.freqs(), 1 / 6)
    assert abs(sum(dist.freqs()) - 1.0) < 1e-12


def test_sa_distribution_example2(example2):
    dist = bl.sa_distribution(example2)
    assert dist.counts == (2, 3, 3, 3, 4, 4)
    assert dist.total == 19
    assert dist.values[0] == "headache"


def test_load_with_declared_sa_order(tmp_path):
    f = tmp_path / "t.csv"
    _write_csv(f, ["70,40,flu", "60,50,flu", "50,60,cold"])
    order = ("flu", "cold", "missing")
    t = bl.load_table(f, patient_schema(), sa_order=order)
    assert t.sa_values == order
    assert t.sa_codes.tolist() == [0, 0, 1]
    with pytest.raises(bl.DataError, match="not in the declared order"):
        bl.load_table(f, patient_schema(), sa_order=("flu", "other"))


def test_sa_distribution_single_value():
    schema = patient_schema()
    rows = [{"weight": 50, "age": 30, "disease": "flu"} for _ in range(4)]
    dist = bl.sa_distribution(bl.table_from_rows(schema, rows))
    assert dist.freqs().tolist() == [1.0]


def test_interning_ascending_with_first_appearance_ties(example2):
    # epilepsy, brain tumors, anemia all occur three times; their canonical
    # order follows first appearance in the rows.
    assert example2.sa_values == (
        "headache", "epilepsy", "brain tumors", "anemia", "angina", "heart murmur"
    )


def test_synthetic_uniform_pigeonhole():
    t = bl.generate_synthetic(50, 50, skew=0.0, seed=1)
    assert (t.sa_counts() == 1).all()


def test_synthetic_deterministic():
    a = bl.generate_synthetic(500, 10, skew=0.7, seed=9)
    b = bl.generate_synthetic(500, 10, skew=0.7, seed=9)
    assert (a.sa_codes == b.sa_codes).all()
    for x, y in zip(a.qi_columns, b.qi_columns):
        assert (x == y).all()
    c = bl.generate_synthetic(500, 10, skew=0.7, seed=10)
    assert not all((x == y).all() for x, y in zip(a.qi_columns, c.qi_columns))


def test_synthetic_census_profile_extremes():
    t = bl.generate_synthetic(500_000, 50, seed=2, sa_freqs=bl.census_like_profile(50))
    dist = bl.sa_distribution(t)
    assert dist.freq(0) == pytest.approx(0.002018, abs=2e-5)
    assert dist.freq(49) == pytest.approx(0.048402, abs=2e-5)


def test_synthetic_requires_row_per_value():
    with pytest.raises(bl.DataError, match="at least one row per SA value"):
        bl.generate_synthetic(5, 10)


def test_synthetic_every_value_present():
    t = bl.generate_synthetic(200, 40, skew=2.5, seed=4)
    assert (t.sa_counts() >= 1).all()


def test_census_like_profile_shape():
    p = bl.census_like_profile(50)
    assert p.shape == (50,)
    assert abs(p.sum() - 1.0) < 1e-12
    assert (np.diff(p) >= 0).all()
    assert p[0] == 0.002018 and p[-1] == 0.048402
    with pytest.raises(bl.DataError):
        bl.census_like_profile(2)


def test_schema_round_trip(tmp_path, example2):
    f = tmp_path / "schema.json"
    bl.save_schema(example2.schema, f)
    schema = bl.load_schema(f)
    assert [a.name for a in schema.attributes] == ["weight", "age", "disease"]
    assert schema.qi_attributes[0].lo == 40


def test_schema_validation():
    with pytest.raises(bl.DataError, match="exactly one SA"):
        bl.DatasetSchema((bl.Attribute("x", "qi", "numeric", lo=0, hi=1),))
    with pytest.raises(bl.DataError, match="lo < hi"):
        bl.Attribute("x", "qi", "numeric", lo=3, hi=3)
    with pytest.raises(bl.DataError, match="categorical"):
        bl.Attribute("x", "sa", "numeric", lo=0, hi=1)
    with pytest.raises(bl.DataError, match="sum to 1"):
        bl.DatasetSchema((
            bl.Attribute("x", "qi", "numeric", lo=0, hi=1, weight=0.4),
            bl.Attribute("y", "qi", "numeric", lo=0, hi=1, weight=0.4),
            bl.Attribute("s", "sa"),
        ))


def test_qi_weights_default():
    schema = patient_schema()
    assert schema.qi_weights().tolist() == [0.5, 0.5]
