from primon.utils.fs import atomic_write_bytes, atomic_write_text, ensure_parent_dir


def test_ensure_parent_dir(tmp_path):
    target = tmp_path / "a" / "b" / "c.txt"
    assert ensure_parent_dir(target) == target
    assert target.parent.is_dir()
    ensure_parent_dir(target)


def test_atomic_write_replaces_and_cleans_up(tmp_path):
    target = tmp_path / "cache" / "table.bin"
    atomic_write_bytes(target, b"old")
    atomic_write_bytes(target, b"new")
    assert target.read_bytes() == b"new"
    assert sorted(p.name for p in target.parent.iterdir()) == ["table.bin"]


def test_atomic_write_text_keeps_line_ends(tmp_path):
    target = tmp_path / "report.csv"
    atomic_write_text(target, "a,b\r\n1,2\r\n")
    assert target.read_bytes() == b"a,b\r\n1,2\r\n"
