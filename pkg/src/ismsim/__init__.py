"""ismsim: simulation of coexisting 2.4 GHz transmitters with labelled spectrograms."""

from ismsim.baseline import classify_region, otsu_threshold, segment_image
from ismsim.channel import (
    ChannelConfig,
    ChannelRealization,
    add_awgn,
    apply_channel,
    draw_channel,
)
from ismsim.dataset_io import (
    export_png,
    generate_dataset,
    generate_sweep_dataset,
    load_manifest,
    load_record,
    render_from_meta,
)
from ismsim.labeling import event_cells, label_mask
from ismsim.metrics import SegMetrics, boundary_f1, compute_metrics, confusion_matrix
from ismsim.scene import (
    DevicePlacement,
    Scenario,
    SimConfig,
    assign_splits,
    distance_sweep,
    render_scene,
    sample_scenario,
)
from ismsim.spectrogram import (
    StftConfig,
    TfGrid,
    power,
    scene_image,
    stft,
    to_image,
    verify_tf_approximation,
)
from ismsim.waveforms import (
    BurstEvent,
    ComplexSignal,
    Technology,
    WaveformSpec,
    generate,
    shift_to_offset,
    spec_for,
)

__all__ = [
    "BurstEvent",
    "ChannelConfig",
    "ChannelRealization",
    "ComplexSignal",
    "DevicePlacement",
    "Scenario",
    "SegMetrics",
    "SimConfig",
    "StftConfig",
    "Technology",
    "TfGrid",
    "WaveformSpec",
    "add_awgn",
    "apply_channel",
    "assign_splits",
    "boundary_f1",
    "classify_region",
    "compute_metrics",
    "confusion_matrix",
    "distance_sweep",
    "draw_channel",
    "event_cells",
    "export_png",
    "generate",
    "generate_dataset",
    "generate_sweep_dataset",
    "label_mask",
    "load_manifest",
    "load_record",
    "otsu_threshold",
    "power",
    "render_from_meta",
    "render_scene",
    "sample_scenario",
    "scene_image",
    "segment_image",
    "shift_to_offset",
    "spec_for",
    "stft",
    "to_image",
    "verify_tf_approximation",
]

__version__ = "0.1.0"
