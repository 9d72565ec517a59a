"""End-to-end acceptance checks.

Each test covers one promised behavior at its stated tolerance and prints a
single PASS line when it holds (run pytest with -s to see them; the -v test
status lines carry the same verdicts). The slower checks time themselves
against their budgets on top of checking correctness.
"""
import time

import numpy as np
from scipy import special, stats

from ismsim.baseline import segment_image
from ismsim.channel import (
    ChannelConfig,
    ChannelRealization,
    apply_channel,
    draw_channel,
    path_loss_lognormal,
    path_loss_wlan,
    tap_powers,
)
from ismsim.dataset_io import generate_dataset, load_manifest, record_paths
from ismsim.labeling import label_mask
from ismsim.metrics import compute_metrics, iou_dice_from_confusion
from ismsim.scene import SimConfig
from ismsim.spectrogram import (
    StftConfig,
    frame_count,
    power,
    scene_image,
    stft,
    verify_tf_approximation,
)
from ismsim.waveforms import BurstEvent, ComplexSignal, Technology, generate, spec_for

CODES = np.array([0, 16, 32, 64, 128], dtype=np.uint8)


def test_metrics_scoring_worked_example_and_speed():
    gt = np.array([[128, 128], [16, 0]], dtype=np.uint8)
    pred = np.array([[128, 16], [16, 0]], dtype=np.uint8)
    m = compute_metrics(gt, pred)
    assert m.accuracy == 0.75
    assert m.iou[Technology.SMARTBAN] == 0.5
    assert abs(m.dice[Technology.SMARTBAN] - 2 / 3) < 1e-12
    assert abs(m.weighted_f1 - 0.75) < 1e-12

    rng = np.random.default_rng(0)
    start = time.perf_counter()
    for _ in range(1000):
        a = CODES[rng.integers(0, 5, (16, 16))]
        b = CODES[rng.integers(0, 5, (16, 16))]
        compute_metrics(a, b)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nPASS metrics scoring: worked example exact, "
          f"1000 random 16x16 pairs in {elapsed:.2f}s (budget 5s)")


def test_dice_iou_identity_on_random_confusions():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        cm = rng.integers(0, 1_000_000, (5, 5))
        iou, dice = iou_dice_from_confusion(cm)
        for tech in iou:
            if iou[tech] is None:
                assert dice[tech] is None
                continue
            worst = max(worst, abs(dice[tech] - 2 * iou[tech] / (1 + iou[tech])))
    assert worst <= 1e-12
    print(f"\nPASS dice/iou identity: worst deviation {worst:.2e} (limit 1e-12)")


def test_fading_statistics():
    start = time.perf_counter()
    n = 20_000

    rayleigh_cfg = ChannelConfig(model="rayleigh")
    p0 = tap_powers(rayleigh_cfg)[0]
    moduli = np.array([abs(draw_channel(rayleigh_cfg, 5.0, s).gains[0])
                       for s in range(n)])
    ks = stats.kstest(moduli, stats.rayleigh(scale=np.sqrt(p0 / 2.0)).cdf)
    assert ks.pvalue > 0.01

    k = 10.0
    rician_cfg = ChannelConfig(model="rician", k_factor=k)
    mean_measured = np.mean([abs(draw_channel(rician_cfg, 5.0, s).gains[0])
                             for s in range(n)])
    sigma = np.sqrt(p0 / (2.0 * (k + 1.0)))
    mean_analytic = sigma * np.sqrt(np.pi / 2.0) * np.exp(-k / 2.0) * (
        (1.0 + k) * special.i0(k / 2.0) + k * special.i1(k / 2.0))
    rel = abs(mean_measured - mean_analytic) / mean_analytic
    assert rel < 0.03

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nPASS fading statistics: Rayleigh KS p={ks.pvalue:.3f} (>0.01), "
          f"Rician K=10 mean off by {rel * 100:.2f}% (<3%), {elapsed:.1f}s "
          f"(budget 10s)")


def test_path_loss_values_and_slopes():
    assert abs(path_loss_wlan(1.0) - 40.148) < 1e-3
    assert abs(path_loss_wlan(10.0) - 57.448) < 1e-3
    for exponent, slope in ((2.5, 25.0), (3.5, 35.0)):
        decade = (path_loss_lognormal(10.0, exponent, 0.0, 0)
                  - path_loss_lognormal(1.0, exponent, 0.0, 0))
        assert abs(decade - slope) < 1e-9
    print("\nPASS path loss: 40.148/57.448 dB at 1/10 m (tol 1e-3), "
          "25 and 35 dB per decade (tol 1e-9)")


def test_stft_frame_count_scaling_and_flat_channel():
    cfg = StftConfig()
    assert frame_count(1_600_000, cfg) == 10_255
    assert frame_count(80_000, cfg) == 512

    rng = np.random.default_rng(3)
    samples = rng.standard_normal(40_000) + 1j * rng.standard_normal(40_000)
    sig = ComplexSignal(sample_rate=80e6, samples=samples)
    p1 = power(stft(sig, cfg)).values
    p2 = power(stft(ComplexSignal(80e6, 2.0 * samples), cfg)).values
    keep = p1 > 1e-12
    gain_db = 10.0 * np.log10(p2[keep] / p1[keep])
    worst = np.max(np.abs(gain_db - 6.0206))
    assert worst < 1e-3

    flat = ChannelRealization(gains=np.array([0.7 - 0.2j]), delays_s=(0.0,),
                              path_loss_db=23.0, seed=0)
    err = verify_tf_approximation(sig, flat, cfg)
    assert err <= 1e-9
    print(f"\nPASS stft: 10255/512 frames, doubling gives "
          f"6.0206 dB +/- {worst:.1e} (tol 1e-3), flat-channel error "
          f"{err:.1e} (tol 1e-9)")


def _rect_event(tech, t0=5e-3, t1=6e-3, f0=-1e6, f1=1e6):
    return BurstEvent(technology=tech, t_start=t0, t_end=t1, f_low=f0, f_high=f1)


def test_label_priority_table_and_single_device_masks():
    members = (Technology.WLAN, Technology.BLUETOOTH, Technology.ZIGBEE,
               Technology.SMARTBAN)
    priority = (Technology.BLUETOOTH, Technology.SMARTBAN, Technology.ZIGBEE,
                Technology.WLAN)
    for subset_bits in range(16):
        subset = [members[b] for b in range(4) if subset_bits >> b & 1]
        mask = label_mask([_rect_event(t) for t in subset])
        expected = 0
        for tech in priority:
            if tech in subset:
                expected = int(tech)
                break
        assert (mask[125:131, 64:77] == expected).all(), f"subset {subset}"
        cleared = mask.copy()
        cleared[120:136, 60:80] = 0
        assert not cleared.any()

    for tech in members:
        _, events = generate(spec_for(tech), seed=2)
        codes = set(np.unique(label_mask(events)))
        assert codes == {0, int(tech)}, tech

    over = label_mask([
        BurstEvent(Technology.WLAN, 0.0, 20e-3, -10e6, 10e6),
        _rect_event(Technology.SMARTBAN),
    ])
    assert (over[125:131, 64:77] == 128).all()
    print("\nPASS labeling: all 16 overlap subsets resolve by priority, "
          "single-device masks carry exactly one code, SmartBAN over WLAN "
          "stays SmartBAN")


def _dominant(mask):
    counts = np.bincount(mask.ravel(), minlength=129)
    counts[0] = 0
    return int(np.argmax(counts)) if counts.any() else 0


def test_baseline_on_clean_single_device_scenes():
    techs = (Technology.WLAN, Technology.BLUETOOTH, Technology.ZIGBEE,
             Technology.SMARTBAN)
    offsets = {
        Technology.WLAN: [(-28 + 5 * i) * 1e6 for i in range(12)],
        Technology.ZIGBEE: [(-35 + 5 * i) * 1e6 for i in range(15)],
        Technology.SMARTBAN: [(-38 + 2 * i) * 1e6 for i in range(39)],
        Technology.BLUETOOTH: [0.0],
    }
    start = time.perf_counter()
    stft_cfg = StftConfig()
    hits = 0
    total_cm = np.zeros((5, 5), dtype=np.int64)
    n_scenes = 200
    for i in range(n_scenes):
        tech = techs[i % 4]
        rng = np.random.default_rng(10_000 + i)
        kwargs = {"center_offset_hz": offsets[tech][rng.integers(len(offsets[tech]))]}
        if tech in (Technology.BLUETOOTH, Technology.SMARTBAN):
            kwargs["slot_count"] = int((1, 3, 5)[rng.integers(3)])
        sig, events = generate(spec_for(tech, **kwargs), seed=20_000 + i)
        los = bool(rng.integers(2))
        ch = ChannelConfig(model="rician" if los else "rayleigh",
                           k_factor=float(rng.uniform(3, 10)) if los else 0.0,
                           path_loss_exponent=2.5 if los else 3.5)
        real = draw_channel(ch, 1.0, seed=30_000 + i)
        image = scene_image(apply_channel(sig, real), stft_cfg)
        pred, _ = segment_image(image)
        truth = label_mask(events)
        if _dominant(pred) == _dominant(truth):
            hits += 1
        total_cm += compute_metrics(truth, pred).confusion
    elapsed = time.perf_counter() - start

    iou, _ = iou_dice_from_confusion(total_cm)
    defined = [v for v in iou.values() if v is not None]
    mean_iou = float(np.mean(defined))
    rate = hits / n_scenes
    assert rate >= 0.95, f"dominant-class rate {rate}"
    assert mean_iou >= 0.5, f"mean IoU {mean_iou}"
    assert elapsed < 120.0
    print(f"\nPASS baseline quality: dominant class right on "
          f"{hits}/{n_scenes} clean 1 m scenes (need 190), aggregate mean "
          f"IoU {mean_iou:.3f} (need 0.5), {elapsed:.0f}s (budget 120s)")


def test_dataset_generation_is_deterministic_and_parallel_safe(tmp_path):
    cfg = SimConfig(master_seed=2024, num_records=100)
    seq_root = tmp_path / "seq"
    par_root = tmp_path / "par"
    man_seq = generate_dataset(cfg, seq_root, jobs=1)
    man_par = generate_dataset(cfg, par_root, jobs=2)
    assert man_seq == man_par
    checked = 0
    for rec in man_seq["records"]:
        for pa, pb in zip(record_paths(seq_root, rec["split"], rec["index"]),
                          record_paths(par_root, rec["split"], rec["index"])):
            assert pa.read_bytes() == pb.read_bytes(), pa.name
            checked += 1
    assert load_manifest(seq_root) == load_manifest(par_root)
    print(f"\nPASS determinism: 100-record dataset identical across "
          f"sequential and 2-worker runs ({checked} files byte-compared)")
