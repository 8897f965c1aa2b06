import numpy as np
import pytest

from stochmem.circuits import golden_eval, AppInputs, AppKind, AppParams, golden_robert
from stochmem.synth import (gen_test_inputs, make_checkerboard, make_scene,
                            make_static_video, make_video)


def test_deterministic_generation():
    a = make_scene(64, 64)
    b = make_scene(64, 64)
    assert np.array_equal(a.data, b.data)


def test_seed_changes_scene():
    assert not np.array_equal(make_scene(64, 64, seed=1).data,
                              make_scene(64, 64, seed=2).data)


def test_checkerboard_edges_only_on_boundaries():
    img = make_checkerboard(64, 64, cell=16)
    edges = golden_robert(img).data
    interior_mask = np.ones_like(edges, dtype=bool)
    for b in range(16, 64, 16):
        interior_mask[b - 1:b + 1, :] = False
        interior_mask[:, b - 1:b + 1] = False
    assert edges[interior_mask].max() == 0.0
    assert edges.max() > 0.0


def test_static_video_kde_all_background():
    frames = make_static_video(32, 32)
    out = golden_eval(AppKind.KDE,
                      AppInputs(image=frames[-1], history=tuple(frames[:32])),
                      AppParams())
    assert out.data.max() == 0.0


def test_moving_square_frame_diff_covers_motion():
    frames = make_video(64, 64)
    out = golden_eval(AppKind.FRAME,
                      AppInputs(image=frames[-1], prev=frames[-2]),
                      AppParams())
    # foreground exists and sits inside the band swept by the objects
    assert out.data.sum() > 0


def test_video_frames_all_valid():
    frames = make_video(48, 40)
    assert len(frames) == 33
    for f in frames:
        assert f.width == 48 and f.height == 40
        assert f.data.min() >= 0.0 and f.data.max() <= 1.0


def test_gen_test_inputs_dispatch():
    assert gen_test_inputs("gradient", (16, 8)).width == 16
    assert len(gen_test_inputs("video", (16, 16))) == 33
    with pytest.raises(ValueError):
        gen_test_inputs("nope", (8, 8))


def test_salt_pepper_density():
    img = gen_test_inputs("salt-pepper", (128, 128))
    extremes = ((img.data == 0.0) | (img.data == 1.0)).mean()
    assert 0.03 <= extremes <= 0.07
