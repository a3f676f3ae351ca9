#  Copyright 2026 kernelcsc contributors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
import numpy as np
import pytest

from kernelcsc.core.enums import SyntheticSuite
from kernelcsc.core.models import ConstraintSet, DataMatrix, SplitSpec
from kernelcsc.services.dataio.constraints import (
    augment_constraints,
    connected_components,
)
from kernelcsc.services.dataio.exceptions import (
    ConstraintFileError,
    DatasetNotFoundError,
    DatasetParseError,
    InconsistentConstraintsError,
    InvalidConstraintError,
    LabelColumnError,
    StratificationError,
)
from kernelcsc.services.dataio.files import (
    load_constraints,
    load_dataset,
    write_constraints,
)
from kernelcsc.services.dataio.splits import (
    pair_budget,
    sample_constraints,
    stratified_split,
    subsample_unconstrained,
)
from kernelcsc.services.dataio.synthetic import make_suite


def test_load_dataset(write_table):
    path = write_table("a\tb\ttarget\n0\t5\t0\n1\t6\t0\n2\t7\t1\n")

    data = load_dataset(path)

    assert data.n == 3
    assert data.d == 2
    assert data.columns == ("a", "b")
    np.testing.assert_array_equal(data.values[:, 0], [0.0, 1.0, 2.0])
    np.testing.assert_array_equal(data.labels, [0, 0, 1])
    assert data.name == "data"


def test_load_dataset_comma_and_string_labels(write_table):
    path = write_table(
        "a,b,kind\n0,1,dog\n1,1,cat\n2,1,dog\n", name="pets.csv"
    )

    data = load_dataset(path, label_column="kind")

    np.testing.assert_array_equal(data.labels, [1, 0, 1])


def test_load_dataset_bad_cell(write_table):
    path = write_table("a\tb\ttarget\n0\t5\t0\n1\tx\t0\n2\t7\t1\n")

    with pytest.raises(DatasetParseError) as exc_info:
        load_dataset(path)

    assert exc_info.value.row == 1
    assert exc_info.value.column == "b"


def test_load_dataset_missing_label(write_table):
    path = write_table("a\tb\n0\t5\n1\t6\n")
    with pytest.raises(LabelColumnError):
        load_dataset(path)


def test_load_dataset_missing_file(tmp_path):
    with pytest.raises(DatasetNotFoundError):
        load_dataset(tmp_path / "absent.tsv")


def test_constraint_file_round_trip(tmp_path):
    cs = ConstraintSet.from_pairs(
        must_link=[(1, 0, 0.5), (2, 3)], cannot_link=[(0, 3)]
    )
    path = tmp_path / "cs.tsv"

    write_constraints(cs, path)

    assert load_constraints(path, n=4) == cs
    assert path.read_text().splitlines()[0] == "0\t1\tML\t0.5"


def test_constraint_file_header_lines(tmp_path):
    cs = ConstraintSet.from_pairs(must_link=[(0, 1)], cannot_link=[(1, 2)])
    path = tmp_path / "cs.tsv"

    write_constraints(cs, path, {"config_hash": "abc", "seed": 7})

    lines = path.read_text().splitlines()
    assert lines[:2] == ["# config_hash: abc", "# seed: 7"]
    assert load_constraints(path, n=3) == cs


def test_constraint_file_comments_and_errors(write_table):
    path = write_table("# header\n\n0\t1\tml\n1\t2\tCL\t2\n", "cs.tsv")
    cs = load_constraints(path)
    assert cs.must_link == [(0, 1, 1.0)]
    assert cs.cannot_link == [(1, 2, 2.0)]

    bad = write_table("0\t1\tMAYBE\n", "bad.tsv")
    with pytest.raises(ConstraintFileError):
        load_constraints(bad)

    out_of_range = write_table("0\t9\tML\n", "range.tsv")
    with pytest.raises(ConstraintFileError):
        load_constraints(out_of_range, n=3)


@pytest.mark.parametrize(
    "must_link,cannot_link",
    [
        ([(0, 0)], []),
        ([(0, 1)], [(1, 0)]),
        ([(0, 1), (1, 0)], []),
        ([(0, 1, -1.0)], []),
    ],
)
def test_constraint_set_invariants(must_link, cannot_link):
    with pytest.raises(InvalidConstraintError):
        ConstraintSet.from_pairs(must_link, cannot_link)


def test_stratified_split_one_per_class():
    data = DataMatrix(
        values=np.arange(8.0).reshape(-1, 1), labels=[0] * 4 + [1] * 4
    )

    split = stratified_split(data, SplitSpec(train_fraction=0.25))

    train_labels = data.labels[split.train_mask]
    assert sorted(train_labels.tolist()) == [0, 1]


def test_stratified_split_rounding():
    data = DataMatrix(
        values=np.arange(100.0).reshape(-1, 1), labels=[0] * 50 + [1] * 50
    )

    split = stratified_split(data, SplitSpec(train_fraction=0.25, seed=3))

    counts = np.bincount(data.labels[split.train_mask], minlength=2)
    assert counts.sum() == 25
    assert sorted(counts.tolist()) == [12, 13]


def test_stratified_split_is_deterministic(blobs):
    spec = SplitSpec(seed=11)
    first = stratified_split(blobs, spec)
    second = stratified_split(blobs, spec)
    np.testing.assert_array_equal(first.train_mask, second.train_mask)


def test_stratified_split_errors():
    data = DataMatrix(values=np.arange(5.0).reshape(-1, 1))
    with pytest.raises(StratificationError):
        stratified_split(data, SplitSpec())

    single = DataMatrix(
        values=np.arange(5.0).reshape(-1, 1), labels=[0, 0, 0, 0, 1]
    )
    with pytest.raises(StratificationError):
        stratified_split(single, SplitSpec())

    few = DataMatrix(values=np.arange(8.0).reshape(-1, 1), labels=[0, 1] * 4)
    with pytest.raises(StratificationError):
        stratified_split(few, SplitSpec(train_fraction=0.25), k=3)


@pytest.mark.parametrize(
    "t,fraction,expected",
    [(4, 1.0, 6), (101, 0.1, 505), (200, 0.5, 5000)],
)
def test_pair_budget(t, fraction, expected):
    spec = SplitSpec(pair_fraction=fraction, max_pairs=5000)
    assert pair_budget(t, spec) == expected


def test_sample_constraints_full_enumeration():
    data = DataMatrix(
        values=np.arange(6.0).reshape(-1, 1),
        labels=[0, 0, 1, 1, 0, 1],
        train_mask=[True, True, True, True, False, False],
    )

    cs = sample_constraints(data, SplitSpec(pair_fraction=1.0))

    assert len(cs) == 6
    for i, j, _ in cs.must_link:
        assert data.labels[i] == data.labels[j]
    for i, j, _ in cs.cannot_link:
        assert data.labels[i] != data.labels[j]
    assert set(cs.indices().tolist()) == {0, 1, 2, 3}


def test_subsample_keeps_constrained_rows():
    cs = ConstraintSet.from_pairs(must_link=[(3, 17)], cannot_link=[(3, 9)])

    rows = subsample_unconstrained(30, cs, 10, seed=5)

    assert rows.size == 10
    assert {3, 9, 17} <= set(rows.tolist())
    assert np.all(np.diff(rows) > 0)
    np.testing.assert_array_equal(
        rows, subsample_unconstrained(30, cs, 10, seed=5)
    )


@pytest.mark.parametrize(
    "must_link,n,expected",
    [
        ([(0, 1), (1, 2)], 5, [(0, 1, 2), (3,), (4,)]),
        ([], 3, [(0,), (1,), (2,)]),
        ([(0, 3), (1, 2)], 4, [(0, 3), (1, 2)]),
    ],
)
def test_connected_components(must_link, n, expected):
    cs = ConstraintSet.from_pairs(must_link=must_link)
    assert connected_components(cs, n) == expected


def test_augment_transitive_closure():
    cs = ConstraintSet.from_pairs(must_link=[(0, 1), (1, 2)])

    augmented = augment_constraints(cs)

    assert [(i, j) for i, j, _ in augmented.must_link] == [
        (0, 1),
        (0, 2),
        (1, 2),
    ]
    assert augmented.n_cannot_link == 0


def test_augment_entailed_cannot_link():
    cs = ConstraintSet.from_pairs(must_link=[(0, 1)], cannot_link=[(0, 2)])

    augmented = augment_constraints(cs)

    assert [(i, j) for i, j, _ in augmented.cannot_link] == [(0, 2), (1, 2)]


def test_augment_keeps_weights_and_is_idempotent():
    cs = ConstraintSet.from_pairs(
        must_link=[(0, 1, 0.5), (1, 2)], cannot_link=[(2, 3, 3.0)]
    )

    augmented = augment_constraints(cs, n=5)

    assert (0, 1, 0.5) in augmented.must_link
    assert (0, 2, 1.0) in augmented.must_link
    assert (2, 3, 3.0) in augmented.cannot_link
    assert augment_constraints(augmented, n=5) == augmented


def test_augment_inconsistent():
    cs = ConstraintSet.from_pairs(
        must_link=[(0, 1), (1, 2)], cannot_link=[(0, 2)]
    )
    with pytest.raises(InconsistentConstraintsError):
        augment_constraints(cs)


@pytest.mark.parametrize(
    "suite,d,classes",
    [
        (SyntheticSuite.NOISY_BLOBS, 7, 3),
        (SyntheticSuite.RINGS, 2, 2),
        (SyntheticSuite.ANISOTROPIC, 2, 3),
        (SyntheticSuite.SCALING, 10, 5),
    ],
)
def test_synthetic_suites(suite, d, classes):
    data = make_suite(suite, n=60, seed=2)

    assert data.n == 60
    assert data.d == d
    assert data.n_classes == classes
    np.testing.assert_array_equal(
        data.values, make_suite(suite, n=60, seed=2).values
    )
