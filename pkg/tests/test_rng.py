"""Tests for the counter-based random stream."""

import numpy as np
import pytest

from usher_lab.core.rng import Rng


class TestRng:
    """Test seeding, spawning and categorical draws."""

    def test_same_seed_same_stream(self) -> None:
        """Identical seeds replay identical draws."""
        assert np.array_equal(Rng(5).random(10), Rng(5).random(10))

    def test_different_seeds_differ(self) -> None:
        """Different seeds give different draws."""
        assert not np.array_equal(Rng(5).random(10), Rng(6).random(10))

    def test_spawned_children_are_independent_and_reproducible(self) -> None:
        """Children differ from each other but not across re-spawns."""
        first, second = Rng(11).spawn(2)
        again, _ = Rng(11).spawn(2)
        draws = first.random(8)
        assert not np.array_equal(draws, second.random(8))
        assert np.array_equal(draws, again.random(8))

    def test_negative_seed_rejected(self) -> None:
        with pytest.raises(ValueError):
            Rng(-1)

    def test_large_seed_accepted(self) -> None:
        """Seeds span the full unsigned 64-bit range."""
        assert Rng(2**64 - 1).seed == 2**64 - 1

    def test_scalar_draws_have_python_types(self) -> None:
        rng = Rng(0)
        assert isinstance(rng.random(), float)
        assert isinstance(rng.integers(4), int)

    def test_integers_in_range(self) -> None:
        draws = Rng(1).integers(3, size=1000)
        assert draws.min() >= 0
        assert draws.max() <= 2
        assert set(draws.tolist()) == {0, 1, 2}

    def test_categorical_point_mass(self) -> None:
        """A one-hot vector always yields its support."""
        rng = Rng(2)
        for _ in range(50):
            assert rng.categorical(np.array([0.0, 0.0, 1.0])) == 2

    def test_categorical_rows_point_masses(self) -> None:
        rows = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        assert Rng(3).categorical_rows(rows).tolist() == [0, 1, 1]

    def test_categorical_frequencies(self) -> None:
        """Empirical frequencies match the probability vector."""
        probs = np.array([0.2, 0.5, 0.3])
        rng = Rng(4)
        draws = rng.categorical_rows(np.broadcast_to(probs, (20000, 3)))
        frequencies = np.bincount(draws, minlength=3) / draws.size
        assert np.allclose(frequencies, probs, atol=0.02)
