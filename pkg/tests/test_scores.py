import pytest

from fairseed.scores import (EmbeddingIndexConfig, InfluenceScores,
                             embedding_index, load_scores, write_scores)

from conftest import make_graph


def ei_fixture():
    # v's in-neighbors: a (F, activity 5), b (M, activity 3), c (F, activity 1)
    return make_graph(
        {"v": "M", "a": "F", "b": "M", "c": "F"},
        {("a", "v"): 5, ("b", "v"): 3, ("c", "v"): 1})


class TestEmbeddingIndex:
    def test_hand_computed(self):
        g = ei_fixture()
        sc = InfluenceScores({"v": 0.4, "a": 0.0, "b": 0.0, "c": 0.0})
        # threshold 3 qualifies a and b: female share 0.5, penalty 1, d_in 3
        t = embedding_index(g, sc, EmbeddingIndexConfig(n_threshold=3, zeta=0.5))
        assert t.scores["v"] == pytest.approx(0.4 * 3 * 1.0)

    def test_penalty_arithmetic(self):
        g = ei_fixture()
        sc = InfluenceScores({v: 1.0 for v in g.nodes})
        t = embedding_index(g, sc, EmbeddingIndexConfig(n_threshold=3, zeta=0.9))
        assert t.scores["v"] == pytest.approx(3 * (1 - abs(0.5 - 0.9)))

    def test_no_qualifying_neighbors_zero(self):
        g = ei_fixture()
        sc = InfluenceScores({v: 1.0 for v in g.nodes})
        t = embedding_index(g, sc, EmbeddingIndexConfig(n_threshold=6))
        assert t.scores["v"] == 0.0

    def test_no_in_neighbors_zero(self):
        g = ei_fixture()
        sc = InfluenceScores({v: 1.0 for v in g.nodes})
        t = embedding_index(g, sc)
        assert t.scores["a"] == 0.0

    def test_scales_linearly_in_score(self):
        g = ei_fixture()
        lo = embedding_index(g, InfluenceScores({v: 0.2 for v in g.nodes}))
        hi = embedding_index(g, InfluenceScores({v: 0.8 for v in g.nodes}))
        assert hi.scores["v"] == pytest.approx(4 * lo.scores["v"])

    def test_missing_score_errors(self):
        g = ei_fixture()
        with pytest.raises(ValueError, match="missing"):
            embedding_index(g, InfluenceScores({"v": 1.0}))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EmbeddingIndexConfig(n_threshold=0)
        with pytest.raises(ValueError):
            EmbeddingIndexConfig(zeta=1.5)


class TestScoreIo:
    def test_round_trip_exact(self, tmp_path):
        g = ei_fixture()
        original = InfluenceScores(
            {"v": 0.123456789012345, "a": 1.0, "b": 0.0, "c": 1 / 3})
        path = tmp_path / "scores.tsv"
        write_scores(original, path)
        loaded = load_scores(path, g)
        assert loaded.scores == original.scores

    def test_missing_node_errors(self, tmp_path):
        g = ei_fixture()
        path = tmp_path / "scores.tsv"
        path.write_text("v\t0.5\na\t0.5\n")
        with pytest.raises(ValueError, match="missing nodes"):
            load_scores(path, g)

    def test_extra_node_warns(self, tmp_path):
        g = make_graph({"a": "F"}, {})
        path = tmp_path / "scores.tsv"
        path.write_text("a\t0.5\nzz\t0.1\n")
        with pytest.warns(UserWarning, match="not in the graph"):
            loaded = load_scores(path, g)
        assert set(loaded.scores) == {"a"}

    def test_range_validated(self, tmp_path):
        g = make_graph({"a": "F"}, {})
        path = tmp_path / "scores.tsv"
        path.write_text("a\t1.5\n")
        with pytest.raises(ValueError, match=r"outside \[0,1\]"):
            load_scores(path, g)

    def test_malformed_line_reported_with_position(self, tmp_path):
        g = make_graph({"a": "F"}, {})
        path = tmp_path / "scores.tsv"
        path.write_text("a\t0.5\nb 0.2\n")
        with pytest.raises(ValueError, match=":2:"):
            load_scores(path, g)

    def test_bad_number_reported(self, tmp_path):
        g = make_graph({"a": "F"}, {})
        path = tmp_path / "scores.tsv"
        path.write_text("a\thigh\n")
        with pytest.raises(ValueError, match="bad score"):
            load_scores(path, g)
