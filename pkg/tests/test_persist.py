import pytest

from axoscheme import edit, model, samples
from axoscheme.model import Axis, new_scheme
from axoscheme.persist import (
    BadMagicError,
    DanglingIndexError,
    ParseError,
    TruncatedError,
    VersionError,
    load_binary,
    load_text,
    save_binary,
    save_text,
)
from genschemes import random_scheme


def small_scheme():
    s = new_scheme()
    a = edit.add_point(s, 0, 0, 0)
    b = edit.add_point(s, 1000, 0, 0)
    c = edit.add_point(s, 1000, 0, 1000)
    edit.add_pipe(s, a, b)
    edit.add_pipe(s, b, c)
    edit.add_offset(s, edit.GeneralOffsetSpec(Axis.Z, 500.0, 250.0))
    return s


# -- binary ---------------------------------------------------------------------

def test_empty_scheme_header_plus_settings_only():
    blob = save_binary(new_scheme())
    assert len(blob) < 200
    assert blob[:4] == b"ASTS"
    assert load_binary(blob) == new_scheme()


def test_reference_scheme_compactness():
    blob = save_binary(samples.reference_scheme())
    assert len(blob) <= 2500


def test_reference_corpus_file_matches_builder():
    from pathlib import Path

    committed = (Path(__file__).parent / "data" / "reference40.asts"
                 ).read_text(encoding="utf-8")
    assert committed == save_text(samples.reference_scheme())
    assert load_text(committed) == load_binary(
        save_binary(samples.reference_scheme()))


def test_binary_roundtrip_equality():
    s = small_scheme()
    assert load_binary(save_binary(s)) == s


def test_truncated_stream_rejected_without_partial_scheme():
    blob = save_binary(small_scheme())
    with pytest.raises(TruncatedError):
        load_binary(blob[: len(blob) // 2])


def test_bad_magic():
    with pytest.raises(BadMagicError):
        load_binary(b"NOPE" + b"\x00" * 16)


def test_version_too_new():
    with pytest.raises(VersionError):
        load_binary(b"ASTS\xff\x7f")


def test_dangling_index_detected():
    # patch a pipe endpoint index inside a cleanly saved stream: the pipes
    # section is tag 2, u32 length, varint count, then (u16 a, u16 b, style)
    clean = save_binary(small_scheme())
    section = clean.find(bytes([2]), 6)
    first_pipe = section + 5 + 1
    patched = bytearray(clean)
    patched[first_pipe + 2:first_pipe + 4] = (999).to_bytes(2, "little")
    with pytest.raises(DanglingIndexError):
        load_binary(bytes(patched))


def test_unknown_future_section_skipped():
    blob = save_binary(small_scheme())
    # append an unknown section tag 200 with 3 payload bytes
    extra = bytes([200]) + (3).to_bytes(4, "little") + b"xyz"
    s = load_binary(blob + extra)
    assert s == small_scheme()


def test_size_monotone_under_additions():
    s = new_scheme()
    sizes = [len(save_binary(s))]
    a = edit.add_point(s, 0, 0, 0)
    sizes.append(len(save_binary(s)))
    b = edit.add_point(s, 1000, 0, 0)
    sizes.append(len(save_binary(s)))
    edit.add_pipe(s, a, b)
    sizes.append(len(save_binary(s)))
    assert sizes == sorted(sizes) and len(set(sizes)) == len(sizes)


# -- text -----------------------------------------------------------------------

def test_minimal_text_document_parses():
    doc = """
# tiny
scheme version=1
point id=1 x=0.0 y=0.0 z=0.0
point id=2 x=1000.0 y=0.0 z=0.0
pipe id=1 a=1 b=2 color=0 line=solid
"""
    s = load_text(doc)
    assert len(s.points) == 2 and len(s.pipes) == 1
    assert model.integrity_check(s) == []


def test_unknown_record_kind_reports_line():
    doc = "scheme version=1\nbogus id=1\n"
    with pytest.raises(ParseError) as err:
        load_text(doc)
    assert err.value.line == 2
    assert "bogus" in str(err.value)


def test_unknown_key_rejected():
    doc = "scheme version=1\npoint id=1 x=0 y=0 z=0 w=1\n"
    with pytest.raises(ParseError) as err:
        load_text(doc)
    assert "'w'" in str(err.value)


def test_text_normalization_idempotent():
    for seed in range(40):
        s = random_scheme(seed)
        t1 = save_text(s)
        t2 = save_text(load_text(t1))
        assert t1 == t2


def test_special_symbols_escape_roundtrip():
    s = new_scheme()
    a = edit.add_point(s, 0, 0, 0)
    b = edit.add_point(s, 1000, 0, 0)
    pid = edit.add_pipe(s, a, b)
    tid = s.insert("texts", model.Text(
        [model.SLOPE_LEFT + "5%", model.DIAMETER + "57" + model.DEGREE,
         'quote " and \\ back'],
        (model.TargetKind.PIPE, 0)))
    lid = s.insert("pipe_leaders", model.LeaderToPipe(tid, pid, 500.0))
    s.texts[tid].main_leader = (model.TargetKind.PIPE, lid)
    s.texts[tid].slope_format = model.SlopeFormat.PERCENT
    t = save_text(s)
    assert model.SLOPE_LEFT not in t  # travels as an escape
    assert "\\sl" in t and "\\dia" in t and "\\deg" in t
    assert load_text(t).texts[1].lines == s.texts[tid].lines


# -- cross-format ------------------------------------------------------------------

def test_cross_format_equivalence():
    for seed in range(60):
        s = random_scheme(seed)
        via_text = load_text(save_text(s))
        via_binary = load_binary(save_binary(s))
        assert via_text == via_binary, f"seed {seed}"


def test_roundtrip_fuzz():
    for seed in range(200):
        s = random_scheme(seed)
        assert load_binary(save_binary(s)) == s, f"seed {seed}"
        assert load_text(save_text(s)) == s, f"seed {seed}"


def test_modified_settings_roundtrip_both_formats():
    s = new_scheme()
    st = s.settings
    st.pipe_style = model.LineStyle(4, model.LineType.DASHED)
    st.joint = model.JointDefaults(model.JointKind.FILLET, 80.0)
    st.breaks.paper_len = 8.0
    st.breaks.label_font = model.FontSetting("gost-b", 7.0, 1.5, True)
    st.text.second_shelf = True
    st.mark.shelf_from = model.ShelfFrom.END
    st.dimension.precision = 2
    st.elevation.shelf_dir = model.ShelfDir.YM
    st.slope.format = model.SlopeFormat.RATIO
    st.grid.first_letter = "Б"
    st.flange_positions = 5
    st.occlusion_gap_len = 3.5
    st.current_param_file = "последний.astsb"
    st.projection = "dimetric"
    st.slice = model.Slice(-250.0, 750.0)
    st.visibility.texts = False
    st.visibility.covered_pipes = True
    st.work_temperature = 150.0
    st.work_pressure = 1.5
    st.autonumber = False
    st.spec_extended = True
    st.scale = 0.03125  # f32-exact
    via_binary = load_binary(save_binary(s))
    via_text = load_text(save_text(s))
    assert via_binary == s
    assert via_text == s


def test_sample_schemes_roundtrip():
    # covers tee blocks, fillet joints, grids and slope texts at once
    for build in (samples.reference_scheme, samples.golden_straight_run,
                  samples.golden_tee_assembly, samples.golden_axis_grid):
        s = build()
        normal = load_binary(save_binary(s))
        assert load_binary(save_binary(normal)) == normal, build.__name__
        assert load_text(save_text(normal)) == normal, build.__name__
