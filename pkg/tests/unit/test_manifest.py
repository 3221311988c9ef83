"""Unit tests for ManifestManager."""

import os
import pytest

from qmemsim.services.inout.manifest_service import MANIFEST_FILE, ManifestManager


@pytest.fixture
def run_dir(temp_dir: str) -> str:
    """Run directory with two output files."""
    for name, content in (("ensemble.csv", "time,e_q\n0.0,0.0\n"), ("summary.json", "{}\n")):
        with open(os.path.join(temp_dir, name), "w") as f:
            f.write(content)
    return temp_dir


@pytest.fixture
def manager(run_dir: str) -> ManifestManager:
    """Create ManifestManager instance for testing."""
    return ManifestManager(run_dir)


def test_file_hash_valid_file(manager: ManifestManager, run_dir: str):
    """Test _file_hash() with valid file."""
    digest = manager._file_hash(os.path.join(run_dir, "ensemble.csv"))
    assert isinstance(digest, str)
    assert len(digest) == 64  # SHA256 produces 64-char hex string


def test_file_hash_nonexistent_file(manager: ManifestManager):
    """Test _file_hash() with non-existent file."""
    with pytest.raises(OSError):
        manager._file_hash("/nonexistent/file.csv")


def test_write_lists_every_output(manager: ManifestManager, run_dir: str):
    """Test that the manifest covers all files except itself."""
    manifest = manager.write(1.2345, "simulate")
    assert sorted(manifest["files"]) == ["ensemble.csv", "summary.json"]
    assert manifest["runtime_seconds"] == 1.234 or manifest["runtime_seconds"] == 1.235
    assert os.path.exists(os.path.join(run_dir, MANIFEST_FILE))


def test_verify_intact(manager: ManifestManager):
    """Test that untouched outputs verify."""
    manager.write(0.1, "simulate")
    assert manager.verify() == []


def test_verify_detects_changes(manager: ManifestManager, run_dir: str):
    """Test that modified and deleted files are reported."""
    manager.write(0.1, "simulate")
    with open(os.path.join(run_dir, "ensemble.csv"), "a") as f:
        f.write("1.0,2.0\n")
    os.remove(os.path.join(run_dir, "summary.json"))
    assert manager.verify() == ["ensemble.csv", "summary.json"]
