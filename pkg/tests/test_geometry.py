import pytest

from ensemble_volumes.geometry import (
    PAPER_TABLE,
    DofEntry,
    check_against_paper,
    dof_table,
    nu,
    render_table,
    tau,
)


@pytest.mark.parametrize("kn,want", [((2, 2), 1), ((3, 3), 4), ((5, 5), 16)])
def test_nu_examples(kn, want):
    assert nu(*kn) == want


@pytest.mark.parametrize("kn,want", [((4, 3), 10), ((5, 4), 25), ((3, 3), 4)])
def test_tau_examples(kn, want):
    assert tau(*kn) == want


def test_published_table_values():
    # the published grid, row by row: k = 2..5, entries "nu (tau)" for n = 2..k
    published = {
        2: [(1, 1)],
        3: [(3, 3), (4, 4)],
        4: [(5, 6), (8, 10), (9, 11)],
        5: [(7, 10), (12, 20), (15, 25), (16, 26)],
    }
    for k, row in published.items():
        for n, (v, t) in enumerate(row, start=2):
            assert PAPER_TABLE[k, n] == (v, t)
            assert (nu(k, n), tau(k, n)) == (v, t)


def test_dof_table():
    entries = dof_table(5)
    assert len(entries) == 10
    assert check_against_paper(entries) == []
    assert [e.row() for e in dof_table(2)] == ["2 2 1 1"]
    assert all(e.nu == e.tau for e in dof_table(3))
    with pytest.raises(ValueError):
        dof_table(1)


def test_check_detects_mismatch():
    entries = dof_table(5)
    entries[3] = DofEntry(entries[3].k, entries[3].n, entries[3].nu + 1, entries[3].tau)
    assert check_against_paper(entries) == [(entries[3].k, entries[3].n)]
    assert len(check_against_paper(dof_table(3))) == 7


def test_redundancy_grows():
    # tau >= nu everywhere; strictly larger from k = 4 on
    for k in range(2, 13):
        for n in range(2, k + 1):
            assert tau(k, n) >= nu(k, n)
            if k >= 4:
                assert tau(k, n) > nu(k, n)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        nu(2, 3)
    with pytest.raises(ValueError):
        tau(3, 1)


def test_render():
    text = render_table(dof_table(3))
    lines = text.splitlines()
    assert len(lines) == 3
    assert "4 (4)" in lines[2] and "1 (1)" in lines[1]


def test_exact_for_large_k():
    from math import comb

    assert tau(60, 60) == 2**60 - 61
    assert tau(60, 30) == sum(comb(60, i) for i in range(2, 31))
    assert isinstance(tau(60, 30), int) and nu(60, 30) == 60 * 58 - 899
