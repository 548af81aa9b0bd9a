import numpy as np
import pytest

from linkpred.corpus import (
    AuthorProfile,
    EdgeTable,
    IngestError,
    parse_author_metadata,
    parse_edge_file,
    resolve_profiles,
    write_author_metadata,
    write_edge_file,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestParseEdgeFile:
    def test_basic_parse_and_canonical_orientation(self, tmp_path):
        p = write(tmp_path, "e.tsv", "7\t3\t1998\n3\t9\t2001\n")
        table, stats = parse_edge_file(p)
        assert stats.edges == 2
        assert list(table) == [(3, 7, 1998), (3, 9, 2001)]

    def test_comments_and_blank_lines(self, tmp_path):
        p = write(tmp_path, "e.tsv", "# header\n\n1\t2\t1990\n# more\n")
        table, stats = parse_edge_file(p)
        assert len(table) == 1
        assert stats.comments == 2
        assert stats.blank == 1

    def test_self_loop_dropped_and_counted(self, tmp_path):
        p = write(tmp_path, "e.tsv", "5\t5\t1992\n1\t2\t1992\n")
        table, stats = parse_edge_file(p)
        assert len(table) == 1
        assert stats.self_loops == 1
        assert stats.malformed == 0

    def test_malformed_lines_counted(self, tmp_path):
        lines = ["1\t2\t1990"] * 300 + ["1\t2", "a\tb\t1990", "1\t2\t99999"]
        p = write(tmp_path, "e.tsv", "\n".join(lines) + "\n")
        table, stats = parse_edge_file(p)
        assert stats.edges == 300
        assert stats.malformed == 3

    def test_malformed_fraction_above_threshold_fatal(self, tmp_path):
        lines = ["1\t2\t1990"] * 50 + ["garbage"] * 3
        p = write(tmp_path, "e.tsv", "\n".join(lines) + "\n")
        with pytest.raises(IngestError, match="malformed"):
            parse_edge_file(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError, match="cannot read"):
            parse_edge_file(tmp_path / "nope.tsv")

    def test_duplicates_kept(self, tmp_path):
        p = write(tmp_path, "e.tsv", "1\t2\t1990\n2\t1\t1990\n1\t2\t1991\n")
        table, _ = parse_edge_file(p)
        assert len(table) == 3

    def test_round_trip(self, tmp_path):
        table = EdgeTable.from_records([(4, 2, 1995), (1, 9, 2000)])
        out = tmp_path / "rt.tsv"
        write_edge_file(table, out)
        back, stats = parse_edge_file(out)
        assert back == table
        assert stats.malformed == 0


class TestEdgeTable:
    def test_from_records_rejects_self_loop(self):
        with pytest.raises(IngestError):
            EdgeTable.from_records([(3, 3, 1990)])

    def test_endpoint_ids_sorted_unique(self):
        t = EdgeTable.from_records([(5, 2, 1990), (2, 9, 1991)])
        assert t.endpoint_ids().tolist() == [2, 5, 9]

    def test_empty(self):
        t = EdgeTable.empty()
        assert len(t) == 0
        assert t.endpoint_ids().tolist() == []


META = """#index 17
#n Ada Lovelace
#a analytical engines institute
#t symbolic computation
#pc 12
#cn 240
#hi 9
#pi 3.5
#upi 1.25

#index 42
#n B
"""


class TestParseAuthorMetadata:
    def test_full_record(self, tmp_path):
        p = write(tmp_path, "a.txt", META)
        profiles, stats = parse_author_metadata(p)
        assert stats.profiles == 2
        a = profiles[17]
        assert a.name == "Ada Lovelace"
        assert a.affiliation == "analytical engines institute"
        assert a.interests == "symbolic computation"
        assert (a.pc, a.cn, a.hi) == (12, 240, 9)
        assert (a.pi, a.upi) == (3.5, 1.25)

    def test_missing_fields_default(self, tmp_path):
        p = write(tmp_path, "a.txt", META)
        profiles, _ = parse_author_metadata(p)
        b = profiles[42]
        assert b.name == "B"
        assert b.affiliation == ""
        assert b.pc == 0 and b.pi == 0.0

    def test_duplicate_id_keeps_last(self, tmp_path):
        p = write(tmp_path, "a.txt", "#index 1\n#n first\n\n#index 1\n#n second\n")
        profiles, stats = parse_author_metadata(p)
        assert profiles[1].name == "second"
        assert stats.duplicate_ids == 1
        assert stats.profiles == 1

    def test_bad_index_block_skipped(self, tmp_path):
        p = write(tmp_path, "a.txt", "#index xyz\n#n ghost\n\n#index 2\n#n real\n")
        profiles, stats = parse_author_metadata(p)
        assert list(profiles) == [2]
        assert stats.skipped_blocks == 1

    def test_unknown_tags_counted(self, tmp_path):
        p = write(tmp_path, "a.txt", "#index 1\n#zz whatever\n#n x\n")
        profiles, stats = parse_author_metadata(p)
        assert profiles[1].name == "x"
        assert stats.unknown_tags == 1

    def test_bad_numeric_value_warns(self, tmp_path):
        p = write(tmp_path, "a.txt", "#index 1\n#pc minus\n#hi -3\n#pi nan\n")
        profiles, stats = parse_author_metadata(p)
        assert profiles[1].pc == 0 and profiles[1].hi == 0
        assert stats.field_warnings == 3

    def test_record_separated_by_new_index_without_blank(self, tmp_path):
        p = write(tmp_path, "a.txt", "#index 1\n#n a\n#index 2\n#n b\n")
        profiles, stats = parse_author_metadata(p)
        assert stats.profiles == 2
        assert profiles[2].name == "b"

    def test_round_trip(self, tmp_path):
        profiles = {
            3: AuthorProfile(id=3, name="x y", interests="graph theory",
                             pc=4, cn=7, hi=2, pi=0.5, upi=0.25),
            1: AuthorProfile(id=1),
        }
        out = tmp_path / "rt.txt"
        write_author_metadata(profiles, out)
        back, stats = parse_author_metadata(out)
        assert stats.profiles == 2
        assert back[3] == profiles[3]
        assert back[1] == profiles[1]


def test_resolve_profiles_synthesizes_missing():
    edges = EdgeTable.from_records([(1, 2, 1990), (2, 3, 1991)])
    known = {2: AuthorProfile(id=2, name="two", pc=5)}
    resolved, synthesized = resolve_profiles(edges, known)
    assert synthesized == 2
    assert resolved[2].pc == 5
    assert resolved[1] == AuthorProfile(id=1)
    assert 2 in known and 1 not in known  # input map untouched
