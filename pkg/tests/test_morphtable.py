import pytest

from morphpiece.errors import ParseError, ZeroValidRecordsError
from morphpiece.morphtable import (
    ColumnMap,
    MorphEntry,
    Morpheme,
    MorphTable,
    Role,
    build_reverse,
    ingest,
    load_table,
    morph_histogram,
    save_table,
    trim,
)

import helpers
import oracles

CANONICAL_LINES = [
    "batting\tbat\ting:suffix",
    "disengage\tgage\tdis:prefix,en:prefix",
    "archeologists\t-\tarchaeo:prefix,logy:suffix,ist:suffix,s:suffix",
    "decompress\tcompress\tde:prefix",
    "photographers\t-\tphoto:prefix,graph:suffix,er:suffix,s:suffix",
    "football\tfoot\tball:cstem",
    "output\tout\tput:stem",
]

REFERENCE_RENDERINGS = {
    "batting": ("bat", "#ing"),
    "disengage": ("dis#", "en#", "gage"),
    "archeologists": ("archaeo#", "#logy", "#ist", "#s"),
    "decompress": ("de#", "compress"),
    "photographers": ("photo#", "#graph", "#er", "#s"),
    "football": ("foot", "#", "ball"),
    "output": ("out", "put"),
}


def write_lines(tmp_path, lines, name="morph.tsv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


class TestRendering:
    def test_role_markers(self):
        assert Morpheme("de", Role.PREFIX).rendered() == "de#"
        assert Morpheme("ing", Role.SUFFIX).rendered() == "#ing"
        assert Morpheme("bat", Role.STEM).rendered() == "bat"

    def test_reference_words(self, tmp_path):
        table, report = ingest(write_lines(tmp_path, CANONICAL_LINES))
        assert report.malformed == 0
        for surface, rendered in REFERENCE_RENDERINGS.items():
            assert table.lookup(surface) == rendered

    def test_compound_break_renders_as_standalone_separator(self):
        entry = helpers.entry(
            "football", ("foot", Role.STEM), ("ball", Role.STEM), breaks=(1,)
        )
        assert entry.rendered() == ("foot", "#", "ball")

    def test_missing_surface_returns_none(self):
        assert helpers.demo_table().lookup("warbling") is None


class TestEntryValidation:
    def test_single_morpheme_rejected(self):
        with pytest.raises(ValueError):
            MorphEntry("cat", (Morpheme("cat", Role.STEM),))

    def test_break_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            helpers.entry("ab", ("a", Role.STEM), ("b", Role.STEM), breaks=(2,))
        with pytest.raises(ValueError):
            helpers.entry("ab", ("a", Role.STEM), ("b", Role.STEM), breaks=(0,))

    def test_break_must_sit_between_stems(self):
        with pytest.raises(ValueError):
            helpers.entry("ab", ("a", Role.STEM), ("b", Role.SUFFIX), breaks=(1,))


class TestTableAccounting:
    def test_counts_exclude_separator_inventory_includes_it(self):
        table = MorphTable(
            [
                helpers.entry("football", ("foot", Role.STEM), ("ball", Role.STEM), breaks=(1,)),
                helpers.entry("footpath", ("foot", Role.STEM), ("path", Role.STEM), breaks=(1,)),
            ]
        )
        assert table.counts == {"foot": 2, "ball": 1, "path": 1}
        assert table.inventory == frozenset({"foot", "ball", "path", "#"})

    def test_counts_match_enumeration_oracle(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        rendered = {s: table.lookup(s) for s in table.surfaces()}
        assert table.counts == oracles.oracle_morph_counts(rendered)

    def test_duplicate_surface_rejected_by_constructor(self):
        e = helpers.entry("batting", ("bat", Role.STEM), ("ing", Role.SUFFIX))
        with pytest.raises(ValueError):
            MorphTable([e, e])


class TestCanonicalParsing:
    @pytest.mark.parametrize(
        "line,reason",
        [
            ("onlytwo\tfields", "field count"),
            ("has space\tx\ty:suffix", "non-alpha surface"),
            ("word4\tx\ty:suffix", "digit in surface"),
            ("word\tx\ty:vowel", "unknown role"),
            ("word\tx\ty", "missing role"),
            ("word\tx\t", "empty items"),
            ("word\tx\ting:suffix,re:prefix", "prefix after suffix"),
            ("word\t-\tball:cstem", "cstem without stem"),
            ("word\t-\ts:suffix", "single morpheme"),
            ("word\tbad stem\ty:suffix", "space inside stem"),
            ("word\tst#em\ty:suffix", "separator inside stem"),
            ("word\tx\t:suffix", "empty morpheme text"),
        ],
    )
    def test_malformed_lines_are_counted_not_fatal(self, tmp_path, line, reason):
        path = write_lines(tmp_path, [CANONICAL_LINES[0], line])
        table, report = ingest(path)
        assert report.malformed == 1, reason
        assert report.entries == 1
        assert len(table) == 1

    def test_blank_lines_skipped_silently(self, tmp_path):
        path = write_lines(tmp_path, [CANONICAL_LINES[0], "", "  ", CANONICAL_LINES[1]])
        table, report = ingest(path)
        assert report.lines == 2
        assert report.malformed == 0
        assert len(table) == 2

    def test_all_lines_malformed_raises(self, tmp_path):
        path = write_lines(tmp_path, ["junk", "also junk"])
        with pytest.raises(ZeroValidRecordsError):
            ingest(path)

    def test_malformed_examples_capped_at_twenty(self, tmp_path):
        lines = [CANONICAL_LINES[0]] + ["junk"] * 25
        _, report = ingest(write_lines(tmp_path, lines))
        assert report.malformed == 25
        assert len(report.examples) == 20
        assert report.examples[0][0] == 2  # line numbers, not indices

    def test_duplicate_keeps_shorter_analysis(self, tmp_path):
        lines = [
            "batting\tbatt\ting:suffix",
            "batting\tb\tatt:suffix,ing:suffix",
        ]
        table, report = ingest(write_lines(tmp_path, lines))
        assert report.duplicates == 1
        assert table.lookup("batting") == ("batt", "#ing")

    def test_duplicate_length_tie_keeps_smaller_rendering(self, tmp_path):
        lines = [
            "batting\tbatt\ting:suffix",
            "batting\tbat\tting:suffix",
        ]
        table, _ = ingest(write_lines(tmp_path, lines))
        assert table.lookup("batting") == ("bat", "#ting")

    def test_unknown_format_name_rejected(self, tmp_path):
        path = write_lines(tmp_path, CANONICAL_LINES)
        with pytest.raises(ValueError):
            ingest(path, fmt="yaml")


class TestColumnMap:
    def test_stem_first_convention(self, tmp_path):
        colmap = ColumnMap(surface_col=0, segmentation_col=2)
        path = write_lines(tmp_path, ["walked\tVERB\twalk|ed\textra"])
        table, _ = ingest(path, fmt=colmap)
        assert table.lookup("walked") == ("walk", "#ed")

    def test_rendered_convention(self, tmp_path):
        colmap = ColumnMap(surface_col=0, segmentation_col=1, convention="rendered")
        path = write_lines(
            tmp_path,
            ["decompress\tde#|compress", "football\tfoot|ball", "batting\tbat|#ing"],
        )
        table, _ = ingest(path, fmt=colmap)
        assert table.lookup("decompress") == ("de#", "compress")
        assert table.lookup("football") == ("foot", "#", "ball")
        assert table.lookup("batting") == ("bat", "#ing")

    def test_custom_separator(self, tmp_path):
        colmap = ColumnMap(surface_col=1, segmentation_col=0, separator="+")
        path = write_lines(tmp_path, ["walk+ed\twalked"])
        table, _ = ingest(path, fmt=colmap)
        assert table.lookup("walked") == ("walk", "#ed")

    def test_short_rows_counted_malformed(self, tmp_path):
        colmap = ColumnMap(surface_col=0, segmentation_col=3)
        path = write_lines(tmp_path, ["walked\twalk|ed", "ok\tx\ty\ta|b"])
        table, report = ingest(path, fmt=colmap)
        assert report.malformed == 1
        assert table.lookup("ok") == ("a", "#b")

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"surface_col": -1, "segmentation_col": 0},
            {"surface_col": 0, "segmentation_col": 0, "separator": ""},
            {"surface_col": 0, "segmentation_col": 1, "convention": "ipa"},
        ],
    )
    def test_bad_configuration_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ColumnMap(**kwargs)


class TestTrim:
    def test_filters_on_original_counts(self):
        table = MorphTable(
            [
                helpers.entry("ax", ("x", Role.STEM), ("y", Role.SUFFIX)),
                helpers.entry("bx", ("x", Role.STEM), ("z", Role.SUFFIX)),
                helpers.entry("cw", ("w", Role.STEM), ("y", Role.SUFFIX)),
            ]
        )
        # x:2 #y:2 #z:1 w:1 -> only "ax" survives min_count=2; a second
        # pass over the survivors would kill it too, so this pins the
        # single-pass behaviour
        trimmed = trim(table, 2)
        assert trimmed.surfaces() == ["ax"]

    def test_min_count_one_is_identity(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        assert trim(table, 1) == table

    def test_monotone_in_min_count(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        sizes = [len(trim(table, k)) for k in range(1, 5)]
        assert sizes == sorted(sizes, reverse=True)

    def test_counts_recomputed_after_trim(self):
        table = MorphTable(
            [
                helpers.entry("ax", ("x", Role.STEM), ("y", Role.SUFFIX)),
                helpers.entry("bx", ("x", Role.STEM), ("z", Role.SUFFIX)),
                helpers.entry("cw", ("w", Role.STEM), ("y", Role.SUFFIX)),
            ]
        )
        trimmed = trim(table, 2)
        assert trimmed.counts == {"x": 1, "#y": 1}
        assert "#z" not in trimmed.inventory

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            trim(helpers.demo_table(), 0)


class TestHistogram:
    def test_separator_not_a_morpheme(self):
        table = MorphTable(
            [
                helpers.entry("football", ("foot", Role.STEM), ("ball", Role.STEM), breaks=(1,)),
                helpers.entry("batting", ("bat", Role.STEM), ("ing", Role.SUFFIX)),
                helpers.entry(
                    "archeologists",
                    ("archaeo", Role.PREFIX),
                    ("logy", Role.SUFFIX),
                    ("ist", Role.SUFFIX),
                    ("s", Role.SUFFIX),
                ),
            ]
        )
        assert morph_histogram(table) == {2: 2, 4: 1}

    def test_matches_enumeration_oracle(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        rendered = {s: table.lookup(s) for s in table.surfaces()}
        assert morph_histogram(table) == oracles.oracle_histogram(rendered)


class TestReverse:
    def test_round_trips_every_entry(self):
        table = helpers.demo_table()
        reverse = build_reverse(table)
        for surface in table.surfaces():
            assert reverse.lookup(table.lookup(surface)) == surface
        assert reverse.collisions == ()

    def test_collision_keeps_smallest_surface(self):
        # two spellings sharing one analysis
        table = MorphTable(
            [
                helpers.entry("colour", ("col", Role.STEM), ("our", Role.SUFFIX)),
                helpers.entry("bolour", ("col", Role.STEM), ("our", Role.SUFFIX)),
            ]
        )
        reverse = build_reverse(table)
        assert reverse.lookup(("col", "#our")) == "bolour"
        assert len(reverse.collisions) == 1
        col = reverse.collisions[0]
        assert (col.kept, col.dropped) == ("bolour", "colour")

    def test_prefix_queries(self):
        reverse = helpers.demo_reverse()
        assert reverse.is_key_prefix(("dis#",))
        assert reverse.is_key_prefix(("dis#", "en#"))
        assert reverse.is_key_prefix(("dis#", "en#", "gage"))  # full key counts
        assert not reverse.is_key_prefix(("en#",))
        assert not reverse.is_key_prefix(("dis#", "gage"))
        assert not reverse.is_key_prefix(())
        assert reverse.lookup(("dis#",)) is None


class TestArtifactIO:
    def test_save_load_round_trip(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        path = str(tmp_path / "table.tsv")
        save_table(table, path)
        assert load_table(path) == table

    def test_save_is_deterministic_and_sorted(self, tmp_path):
        table, _ = ingest(write_lines(tmp_path, CANONICAL_LINES))
        p1, p2 = str(tmp_path / "a.tsv"), str(tmp_path / "b.tsv")
        save_table(table, p1)
        save_table(load_table(p1), p2)
        b1, b2 = open(p1, "rb").read(), open(p2, "rb").read()
        assert b1 == b2
        surfaces = [l.split("\t")[0] for l in b1.decode().splitlines()]
        assert surfaces == sorted(surfaces)

    @pytest.mark.parametrize(
        "bad_line",
        [
            "nofields",
            "word\ta\tb",
            "word\t",
            "word\ta  b",
            "word\ta#b #x",
            "word\t## #x",
            "batting\tbat #ing",  # duplicate of line 1
        ],
    )
    def test_corrupt_line_reports_position(self, tmp_path, bad_line):
        path = tmp_path / "table.tsv"
        path.write_text("batting\tbat #ing\n" + bad_line + "\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            load_table(str(path))
        assert err.value.line_no == 2
        assert err.value.path == str(path)

    def test_empty_artifact_rejected(self, tmp_path):
        path = tmp_path / "table.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ZeroValidRecordsError):
            load_table(str(path))
