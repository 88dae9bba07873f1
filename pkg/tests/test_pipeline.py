import json

import numpy as np
import pytest

from gaq.catalog import load_entries, serialize_catalog
from gaq.cli import main as cli_main
from gaq.errors import CatalogInvalid
from gaq.pipeline import (
    PipelineConfig,
    cache_load,
    cache_store,
    classify_order,
    classify_orders,
    iso_query,
    render_counts_table,
    resolve_instance,
)

SMALL_COUNTS = {1: 1, 2: 1, 3: 2, 4: 3, 5: 4, 6: 3, 7: 6, 8: 9}


class TestClassify:
    @pytest.mark.parametrize("order,count", sorted(SMALL_COUNTS.items()))
    def test_small_orders(self, order, count):
        report = classify_order(order)
        assert report.class_count == count
        assert not report.partial

    def test_members_cover_all_instances(self):
        report = classify_order(8)
        assert sum(c.member_count for c in report.classes) >= report.class_count

    def test_prime_orders_give_p_minus_1(self):
        for p in (2, 3, 5, 7, 11, 13):
            assert classify_order(p).class_count == p - 1

    def test_deterministic(self):
        a = classify_order(8).to_json_dict()
        b = classify_order(8).to_json_dict()
        a.pop("seconds")
        b.pop("seconds")
        assert a == b

    def test_without_conjugacy_reduction_same_counts(self):
        for order in range(1, 13):
            full = classify_order(order, PipelineConfig(conjugacy_reduction=False))
            reduced = classify_order(order)
            assert full.class_count == reduced.class_count, order

    def test_oracle_mode_passes(self):
        config = PipelineConfig(oracle=True)
        for order in (6, 8, 10):
            report = classify_order(order, config)
            assert report.class_count == SMALL_COUNTS.get(order, report.class_count)

    def test_threads_match_serial(self):
        serial = classify_order(12)
        threaded = classify_order(12, PipelineConfig(threads=2))
        assert serial.class_count == threaded.class_count
        assert [c.to_json_dict() for c in serial.classes] == \
               [c.to_json_dict() for c in threaded.classes]

    def test_budget_trip_reports_partial(self):
        report = classify_order(8, PipelineConfig(aut_budget=10))
        assert report.partial
        assert report.class_count is None
        assert any("Aut" in s.reason for s in report.skipped)

    def test_invalid_catalog_refused(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        entries = load_entries(order=8)[:-1]
        path.write_text(serialize_catalog(entries), encoding="utf-8")
        with pytest.raises(CatalogInvalid):
            classify_order(8, PipelineConfig(catalog_path=str(path)))


class TestCache:
    def test_store_then_load(self, tmp_path):
        config = PipelineConfig(cache_dir=str(tmp_path))
        report = classify_order(6, config)
        loaded = cache_load(6, config)
        assert loaded is not None
        assert loaded.to_json_dict() == report.to_json_dict()

    def test_catalog_edit_invalidates(self, tmp_path):
        catalog_a = tmp_path / "a.jsonl"
        text = serialize_catalog(load_entries())
        catalog_a.write_text(text, encoding="utf-8")
        config = PipelineConfig(cache_dir=str(tmp_path / "cache"),
                                catalog_path=str(catalog_a))
        classify_order(6, config)
        assert cache_load(6, config) is not None
        catalog_a.write_text(text + "# comment\n", encoding="utf-8")
        assert cache_load(6, config) is None

    def test_config_change_invalidates(self, tmp_path):
        config = PipelineConfig(cache_dir=str(tmp_path))
        classify_order(6, config)
        other = PipelineConfig(cache_dir=str(tmp_path), aut_budget=999)
        assert cache_load(6, other) is None

    def test_corrupt_cache_recomputed_with_warning(self, tmp_path):
        config = PipelineConfig(cache_dir=str(tmp_path))
        path = cache_store(classify_order(6, config), str(tmp_path))
        path.write_text("{not json", encoding="utf-8")
        with pytest.warns(UserWarning):
            assert cache_load(6, config) is None
        reports = classify_orders([6], config)
        assert reports[0].class_count == 3


class TestIsoQuery:
    def test_same_spec_twice(self):
        result = iso_query((6, 0, "identity"), (6, 0, "identity"))
        assert result.verdict == "yes"
        assert result.witness["full_map"] == [0, 1, 2, 3, 4, 5]

    def test_worked_pair_specs(self, tmp_path, worked_pair):
        # locate the two groups in the catalog and run the twists through files
        from gaq.catalog import group_iso, load_catalog

        groups = load_catalog(16)
        gid_direct = gid_twisted = None
        iso_d = iso_t = None
        for gid, grp in enumerate(groups):
            f = group_iso(worked_pair.direct, grp)
            if f is not None:
                gid_direct, iso_d = gid, f
            f = group_iso(worked_pair.twisted, grp)
            if f is not None:
                gid_twisted, iso_t = gid, f
        assert gid_direct is not None and gid_twisted is not None
        assert gid_direct != gid_twisted

        # transport the twists along the located isomorphisms
        from gaq.permutations import inverse_perm

        tw_a = iso_d[worked_pair.twist2_direct.images[inverse_perm(iso_d)]]
        tw_b = iso_t[worked_pair.twist2_twisted.images[inverse_perm(iso_t)]]
        fa = tmp_path / "a.json"
        fb = tmp_path / "b.json"
        fa.write_text(json.dumps([int(x) for x in tw_a]), encoding="utf-8")
        fb.write_text(json.dumps([int(x) for x in tw_b]), encoding="utf-8")
        result = iso_query((16, gid_direct, str(fa)), (16, gid_twisted, str(fb)))
        assert result.verdict == "yes"

    def test_non_isomorphic(self, tmp_path):
        neg = tmp_path / "neg.json"
        neg.write_text(json.dumps([0, 2, 1]), encoding="utf-8")
        result = iso_query((3, 0, "identity"), (3, 0, str(neg)))
        assert result.verdict == "no"

    def test_bad_group_id(self):
        with pytest.raises(ValueError):
            resolve_instance(6, 5, "identity")


class TestRendering:
    def test_counts_table_layout(self):
        reports = classify_orders(range(1, 6))
        text = render_counts_table(reports)
        assert "order" in text and "count" in text
        assert "4" in text

    def test_partial_shows_question_mark(self):
        report = classify_order(8, PipelineConfig(aut_budget=10))
        text = render_counts_table([report])
        assert "?" in text


class TestCli:
    def test_classify_range(self, capsys, tmp_path):
        out_json = tmp_path / "reports.json"
        code = cli_main(["classify", "--orders", "1..5", "--json", str(out_json)])
        assert code == 0
        captured = capsys.readouterr()
        assert "order 5: 4 quandle classes" in captured.out
        payload = json.loads(out_json.read_text(encoding="utf-8"))
        assert payload["schema"] == 1
        assert [r["class_count"] for r in payload["reports"]] == [1, 1, 2, 3, 4]

    def test_classify_partial_exit_code(self, capsys):
        code = cli_main(["classify", "--order", "8", "--aut-budget", "10"])
        assert code == 2

    def test_validate_ok(self, capsys):
        assert cli_main(["validate", "--order", "8"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_validate_failure_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.jsonl"
        path.write_text(serialize_catalog(load_entries(order=8)[:-1]),
                        encoding="utf-8")
        assert cli_main(["validate", "--order", "8", "--catalog", str(path)]) == 1

    def test_iso_command(self, capsys, tmp_path):
        out = tmp_path / "witness.json"
        code = cli_main(["iso", "--a", "6:0:identity", "--b", "6:1:identity",
                         "--json", str(out)])
        assert code == 0
        assert "yes" in capsys.readouterr().out
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["verdict"] == "yes"
        assert len(payload["witness"]["full_map"]) == 6

    def test_env_budget_override(self, monkeypatch):
        monkeypatch.setenv("GAQ_AUT_BUDGET", "10")
        config = PipelineConfig.from_env()
        assert config.aut_budget == 10
