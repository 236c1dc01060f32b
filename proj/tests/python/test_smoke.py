# Copyright 2026 The mixcap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the python bindings: every exposed operation gets at
least one call with a sanity-checked result."""

import json
import math

import numpy as np
import pytest

import mixcap


def tone(freq_hz: float, seconds: float, rate: int = 16000, amplitude: float = 0.5):
    t = np.arange(int(seconds * rate), dtype=np.float32)
    samples = (amplitude * np.sin(2 * math.pi * freq_hz * t / rate)).astype(np.float32)
    return mixcap.AudioClip(samples, rate)


def test_clip_round_trip_through_numpy():
    clip = tone(440.0, 0.5)
    assert clip.sample_rate == 16000
    assert len(clip) == 8000
    assert clip.duration_seconds == pytest.approx(0.5)
    assert clip.samples.dtype == np.float32


def test_wav_io(tmp_path):
    clip = tone(440.0, 0.25, amplitude=0.25)
    clipped = mixcap.save_wav(clip, str(tmp_path / "t.wav"))
    assert clipped == 0
    back = mixcap.load_wav(str(tmp_path / "t.wav"))
    assert back.sample_rate == 16000
    np.testing.assert_allclose(back.samples, clip.samples, atol=1.0 / 32768.0)


def test_resample_and_pad():
    clip = tone(440.0, 1.0, rate=32000)
    down = mixcap.resample(clip, 16000)
    assert abs(len(down) - 16000) <= 1
    padded = mixcap.pad_or_truncate(down, 10.0)
    assert len(padded) == 160000


def test_gain_scales_amplitude():
    clip = tone(300.0, 0.2)
    louder = mixcap.apply_gain(clip, 6.0)
    ratio = np.abs(louder.samples).max() / np.abs(clip.samples).max()
    assert ratio == pytest.approx(10 ** (6.0 / 20.0), rel=1e-4)


def test_time_stretch_changes_duration():
    clip = tone(440.0, 1.0)
    slower = mixcap.time_stretch(clip, 0.8)
    assert len(slower) == pytest.approx(len(clip) / 0.8, rel=0.02)


def test_pitch_shift_keeps_duration():
    clip = tone(440.0, 1.0)
    shifted = mixcap.pitch_shift(clip, 0.5)
    assert len(shifted) == pytest.approx(len(clip), rel=0.01)
    spectrum = np.abs(np.fft.rfft(shifted.samples))
    peak_hz = spectrum.argmax() * 16000 / len(shifted)
    assert peak_hz == pytest.approx(440.0 * math.sqrt(2.0), rel=0.03)


def test_halve_duration_is_seeded():
    clip = tone(200.0, 1.0)
    a = mixcap.halve_duration(clip, seed=7)
    b = mixcap.halve_duration(clip, seed=7)
    assert len(a) == 8000
    np.testing.assert_array_equal(a.samples, b.samples)


def test_concat_and_mix():
    a = tone(300.0, 1.0)
    b = tone(700.0, 0.5)
    joined = mixcap.concat_with_silence(a, b)
    assert len(joined) == 16000 + 8000 + 8000
    mixed = mixcap.mix_at_snr(a, b, snr_db=0.0, offset_samples=100)
    assert len(mixed) == 16000


def test_logmel_shape():
    feats = mixcap.logmel(tone(1000.0, 10.0))
    assert feats.shape == (994, 64)
    assert np.isfinite(feats).all()


def test_plan_sampling_and_hard_negative(tmp_path):
    corpus = tmp_path / "sources.jsonl"
    lines = []
    for i in range(6):
        clip = tone(200.0 + 100 * i, 2.5)
        mixcap.save_wav(clip, str(tmp_path / f"c{i}.wav"))
        lines.append(
            json.dumps(
                {
                    "id": f"c{i}",
                    "audio_path": f"c{i}.wav",
                    "labels": ["dog"],
                    "start_s": 0.0,
                    "end_s": 2.5,
                }
            )
        )
    corpus.write_text("\n".join(lines) + "\n")

    plan_json = mixcap.sample_plan(7, str(corpus), p_transform=1.0, p_mix=0.2)
    plan = json.loads(plan_json)
    assert 1 <= len(plan["source_ids"]) <= 5
    assert mixcap.sample_plan(7, str(corpus), p_transform=1.0, p_mix=0.2) == plan_json

    negative_json = mixcap.hard_negative_plan(plan_json)
    negative = json.loads(negative_json)
    assert negative["source_ids"] == plan["source_ids"]
    assert negative["orders"] == plan["orders"]
    assert mixcap.plan_hash(plan_json) != mixcap.plan_hash(negative_json)


def test_caption_query_and_offline_backend():
    events = [
        mixcap.EventDescriptor("dog", ["loud"], 0),
        mixcap.EventDescriptor("rain", ["background"], 0),
    ]
    query = json.loads(mixcap.build_query(events))
    assert query == [
        {"sound": "dog", "description": ["loud"], "order": 0},
        {"sound": "rain", "description": ["background"], "order": 0},
    ]
    caption = mixcap.offline_caption(events)
    assert caption == "A dog barks loudly while rain falls in the background."
    assert mixcap.postprocess_caption(caption) is None
    assert mixcap.postprocess_caption("too short") == "too_short"
    prompt = mixcap.build_prompt(2)
    assert "Only return the stories" in prompt and "2." in prompt


def test_retrieval_metrics():
    rng = np.random.default_rng(3)
    audio = rng.normal(size=(20, 8))
    audio /= np.linalg.norm(audio, axis=1, keepdims=True)  # unit rows
    sim = mixcap.similarity_matrix(audio, audio)
    np.testing.assert_allclose(sim, audio @ audio.T)
    assert mixcap.recall_at_k(sim, 1) == 100.0

    mask = mixcap.build_mask(["a", "b", "a"])
    np.testing.assert_array_equal(mask, [[1, 1, 0], [1, 1, 1], [0, 1, 1]])


def test_info_nce_and_gradient():
    s = np.eye(2)
    mask = np.ones((2, 2))
    total, t2a, a2t = mixcap.info_nce_loss(s, mask, 1.0)
    assert total == pytest.approx(0.6266, abs=1e-4)
    assert t2a == pytest.approx(a2t)

    grad = mixcap.info_nce_gradient(s, mask, 1.0)
    assert grad.shape == (2, 2)
    # descent direction: diagonal gradient entries are negative
    assert grad[0, 0] < 0 and grad[1, 1] < 0


def test_modifier_tools():
    flipped, categories = mixcap.flip_modifiers("A loud engine roars quickly")
    assert flipped == "A quiet engine roars slowly"
    assert set(categories) == {"volume", "speed"}

    stats = mixcap.modifier_stats(["a loud bang", "a short chirp", "nothing"])
    assert stats["volume"] == (1, pytest.approx(100.0 / 3))
    assert stats["duration"][0] == 1
    assert stats["pitch"][0] == 0


def test_mut_score_ties_are_not_closer():
    rng = np.random.default_rng(5)
    audio = rng.normal(size=(50, 4))
    text = rng.normal(size=(50, 4))
    assert mixcap.mut_score(audio, text, text) == 0.0
