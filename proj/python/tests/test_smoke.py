import json
import math
import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

import crackmusic as cm

ROOT = Path(os.environ.get("CRACKMUSIC_ROOT", Path(__file__).resolve().parents[2]))
PRESETS = ROOT / "configs"
CLI = os.environ.get("CRACKMUSIC_CLI")


def test_bessel_and_average():
    assert cm.bessel_j0(0.0) == 1.0
    dirs = cm.make_directions(360)
    assert abs(cm.direction_average(1.0, (3.0, 4.0), dirs) - cm.bessel_j0(5.0)) < 1e-10


def test_forward_svd_image_pipeline():
    k = 2 * math.pi / 0.5
    scene = cm.Scene(cm.three_small_cracks(0.05), k)
    dirs = cm.make_directions(16)
    msr = cm.assemble_msr(scene, 0.05, dirs)
    assert msr.entries.shape == (16, 16)
    assert np.allclose(msr.entries, msr.entries.T)
    space = cm.select_signal_dim(cm.svd_msr(msr), "log_gap")
    assert space.dim == 3
    grid = cm.ImageGrid(-1.5, 1.5, -1.5, 1.5, 0.02)
    image = cm.imaging_map(space, grid, 10.0, dirs)
    assert image.values.shape == (grid.ny, grid.nx)
    predicted = [(k / 10.0 * z.x, k / 10.0 * z.y) for z in scene.centers()]
    for peak in cm.find_peaks(image, 3):
        x, y = peak.location
        assert min(math.hypot(x - px, y - py) for px, py in predicted) < 0.04


def test_noise_is_seeded():
    msr = cm.assemble_msr(cm.Scene(cm.three_small_cracks(), 10.0), 0.05, cm.make_directions(32))
    a = cm.add_awgn(msr, 20.0, 7)
    b = cm.add_awgn(msr, 20.0, 7)
    assert np.array_equal(a.entries, b.entries)
    assert abs(cm.measured_snr_db(msr.entries, a.entries) - 20.0) < 0.5


def test_projector_and_theory():
    msr = cm.assemble_msr(cm.Scene(cm.three_small_cracks(), 10.0), 0.05, cm.make_directions(12))
    p = cm.noise_projector(cm.select_signal_dim(cm.svd_msr(msr), "manual:3"))
    assert np.allclose(p @ p, p, atol=1e-12)
    assert abs(np.trace(p).real - 9) < 1e-8
    t = cm.theory_map(12.0, 10.0, [(0.2, 0.1)], cm.ImageGrid(-1, 1, -1, 1, 0.1))
    assert t.provenance == "theory:squared"
    assert np.all(t.values >= 1.0 - 1e-12)


def test_calibration_small_scatterer():
    k = 2 * math.pi / 0.4
    scene = cm.Scene([cm.SegmentCrack((0.0, -1.0), 0.05), cm.SegmentCrack((0.5, 0.6), 0.05)], k)
    msr = cm.assemble_msr(scene, 0.05, cm.make_directions(32))
    result = cm.calibrate(msr, (0.0, -1.0), 20.0, cm.ImageGrid(), "manual:2")
    assert abs(result.k_hat - k) / k < 0.05
    assert result.reimaged.eta == result.k_hat


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        cm.make_directions(1)
    with pytest.raises(ValueError):
        cm.select_signal_dim(cm.svd_msr(cm.assemble_msr(cm.Scene(cm.three_small_cracks(), 5.0), 0.05,
                                                        cm.make_directions(4))), "elbow")


def test_msr_round_trip(tmp_path):
    msr = cm.add_awgn(cm.assemble_msr(cm.Scene(cm.three_small_cracks(), 5.0), 0.05, cm.make_directions(8)), 20.0, 3)
    cm.write_msr(msr, str(tmp_path / "k.csv"))
    back = cm.read_msr(str(tmp_path / "k.csv"))
    assert np.array_equal(back.entries, msr.entries)
    assert back.seed == 3


def test_presets_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((ROOT / "schema" / "run_config.schema.json").read_text())
    for name in ("fig1", "fig2", "fig3", "fig4"):
        doc = json.loads((PRESETS / f"{name}.json").read_text())
        jsonschema.validate(doc, schema)
        # the serialized form of the parsed config is also valid
        jsonschema.validate(json.loads(cm.load_config(str(PRESETS / f"{name}.json")).to_json()), schema)
    scene_schema = dict(schema["$defs"]["scene"], **{"$defs": schema["$defs"]})
    jsonschema.validate(json.loads((PRESETS / "scenes" / "extended_arc.json").read_text()), scene_schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"scene_file": "a.json", "colour": "blue"}, schema)


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_forward_and_svd(tmp_path):
    out = tmp_path / "fig3"
    subprocess.run([CLI, "forward", "--config", str(PRESETS / "fig3.json"), "--out", str(out)], check=True,
                   capture_output=True)
    meta = json.loads((out / "msr.json").read_text())
    assert meta["N"] == 32 and meta["provenance"] == "bie"
    assert meta["reciprocity_audit"] < 1e-6
    subprocess.run([CLI, "svd", "--msr", str(out / "msr.csv"), "--out", str(out), "--signal-dim", "log_gap"],
                   check=True, capture_output=True)
    rows = (out / "spectrum.csv").read_text().splitlines()
    assert rows[0] == "index,sigma,ratio" and len(rows) == 33
    bad = subprocess.run([CLI, "forward", "--config", str(tmp_path / "missing.json")], capture_output=True)
    assert bad.returncode == 2
