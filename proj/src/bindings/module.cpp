// Copyright 2026 The mixcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mixcap/captioner.hpp"
#include "mixcap/composer.hpp"
#include "mixcap/dsp.hpp"
#include "mixcap/errors.hpp"
#include "mixcap/eval.hpp"
#include "mixcap/features.hpp"
#include "mixcap/negatives.hpp"

namespace py = pybind11;
using namespace mixcap;

namespace {

AudioClip clip_from_array(py::array_t<float, py::array::c_style | py::array::forcecast> samples,
                          int sample_rate) {
  if (samples.ndim() != 1)
    throw InvalidArgumentError("samples must be a 1-D array");
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(samples.data(), samples.data() + samples.size());
  return clip;
}

py::array_t<float> array_from_clip(const AudioClip& clip) {
  // (count, pointer) constructor: copies with proper strides
  return py::array_t<float>(static_cast<py::ssize_t>(clip.size()), clip.samples.data());
}

Matrix matrix_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw InvalidArgumentError("expected a 2-D array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data.begin());
  return m;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols)});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mixcap core: audio augmentation, caption queries, and retrieval metrics";

  py::register_exception<Error>(m, "MixcapError", PyExc_RuntimeError);

  py::class_<AudioClip>(m, "AudioClip")
      .def(py::init(&clip_from_array), py::arg("samples"), py::arg("sample_rate"))
      .def_property_readonly("samples",
                             [](const AudioClip& c) { return array_from_clip(c); })
      .def_readonly("sample_rate", &AudioClip::sample_rate)
      .def_property_readonly("duration_seconds", &AudioClip::duration_seconds)
      .def("__len__", &AudioClip::size);

  py::class_<EventDescriptor>(m, "EventDescriptor")
      .def(py::init([](std::string sound, std::vector<std::string> description, int order) {
             EventDescriptor d;
             d.sound = std::move(sound);
             d.description = std::move(description);
             d.order = order;
             return d;
           }),
           py::arg("sound"), py::arg("description"), py::arg("order"))
      .def_readwrite("sound", &EventDescriptor::sound)
      .def_readwrite("description", &EventDescriptor::description)
      .def_readwrite("order", &EventDescriptor::order);

  // audio I/O and shaping
  m.def("load_wav", &load_wav, py::arg("path"));
  m.def(
      "save_wav",
      [](const AudioClip& clip, const std::filesystem::path& path) {
        return save_wav(clip, path).clipped_samples;
      },
      py::arg("clip"), py::arg("path"), "Returns the number of hard-clipped samples");
  m.def("resample", &resample, py::arg("clip"), py::arg("target_rate"));
  m.def("pad_or_truncate", &pad_or_truncate, py::arg("clip"), py::arg("target_seconds"));

  // per-clip transforms and combinators
  m.def("apply_gain", &apply_gain, py::arg("clip"), py::arg("gain_db"));
  m.def("pitch_shift", &pitch_shift, py::arg("clip"), py::arg("octaves"));
  m.def("time_stretch", &time_stretch, py::arg("clip"), py::arg("rate"));
  m.def(
      "halve_duration",
      [](const AudioClip& clip, std::uint64_t seed) {
        Rng rng(seed);
        return halve_duration(clip, rng);
      },
      py::arg("clip"), py::arg("seed"));
  m.def("concat_with_silence", &concat_with_silence, py::arg("c1"), py::arg("c2"));
  m.def(
      "mix_at_snr",
      [](const AudioClip& signal, const AudioClip& noise, double snr_db,
         std::size_t offset_samples) {
        return mix_at_snr(signal, noise, snr_db, offset_samples);
      },
      py::arg("signal"), py::arg("noise"), py::arg("snr_db"), py::arg("offset_samples"));

  m.def(
      "logmel",
      [](const AudioClip& clip) {
        const FeatureMatrix f = logmel(clip);
        py::array_t<float> out(
            {static_cast<py::ssize_t>(f.n_frames), static_cast<py::ssize_t>(f.n_bins)});
        std::copy(f.values.begin(), f.values.end(), out.mutable_data());
        return out;
      },
      py::arg("clip"));

  // plans (JSON-string surface keeps the python API stable)
  m.def(
      "sample_plan",
      [](std::uint64_t seed, const std::string& corpus_manifest, double p_transform,
         double p_mix) {
        Rng rng(seed);
        SampleParams params;
        params.p_transform = p_transform;
        params.p_mix = p_mix;
        return plan_to_json(sample_plan(rng, load_source_manifest(corpus_manifest), params));
      },
      py::arg("seed"), py::arg("corpus_manifest"), py::arg("p_transform") = 0.3,
      py::arg("p_mix") = 0.2, "Draw a plan against a source manifest; returns plan JSON");
  m.def(
      "hard_negative_plan",
      [](const std::string& plan_json) {
        return plan_to_json(hard_negative_plan(plan_from_json(plan_json)));
      },
      py::arg("plan_json"));
  m.def(
      "plan_hash",
      [](const std::string& plan_json) { return plan_hash(plan_from_json(plan_json)); },
      py::arg("plan_json"));

  // caption queries and the offline backend
  m.def("build_query", &build_query, py::arg("descriptors"));
  m.def("parse_query", &parse_query, py::arg("json_text"));
  m.def("build_prompt", &build_prompt, py::arg("n_scenarios"),
        py::arg("instruction_override") = "");
  m.def("offline_caption", &OfflineTemplateBackend::caption_scenario, py::arg("descriptors"));
  m.def(
      "postprocess_caption",
      [](const std::string& caption, int min_words, int max_words) -> py::object {
        PostprocessPolicy policy{min_words, max_words};
        const auto verdict = postprocess_caption(caption, policy);
        if (!verdict) return py::none();
        return py::str(caption_reject_name(*verdict));
      },
      py::arg("caption"), py::arg("min_words") = 6, py::arg("max_words") = 45,
      "None when accepted, else the rejection reason");

  // evaluation metrics
  m.def(
      "similarity_matrix",
      [](py::array_t<double> audio, py::array_t<double> text) {
        return array_from_matrix(
            similarity_matrix(matrix_from_array(std::move(audio)),
                              matrix_from_array(std::move(text))));
      },
      py::arg("audio"), py::arg("text"));
  m.def(
      "build_mask",
      [](const std::vector<std::string>& groups) {
        return array_from_matrix(build_mask(groups));
      },
      py::arg("pair_groups"));
  m.def(
      "info_nce_loss",
      [](py::array_t<double> s, py::array_t<double> mask, double temperature) {
        const auto r = info_nce_loss(matrix_from_array(std::move(s)),
                                     matrix_from_array(std::move(mask)), temperature);
        return py::make_tuple(r.total, r.text_to_audio, r.audio_to_text);
      },
      py::arg("similarity"), py::arg("mask"), py::arg("temperature"),
      "Returns (total, text_to_audio, audio_to_text)");
  m.def(
      "info_nce_gradient",
      [](py::array_t<double> s, py::array_t<double> mask, double temperature) {
        return array_from_matrix(info_nce_gradient(matrix_from_array(std::move(s)),
                                                   matrix_from_array(std::move(mask)),
                                                   temperature));
      },
      py::arg("similarity"), py::arg("mask"), py::arg("temperature"));
  m.def(
      "recall_at_k",
      [](py::array_t<double> s, std::size_t k) {
        return recall_at_k(matrix_from_array(std::move(s)), k);
      },
      py::arg("similarity"), py::arg("k"));
  m.def(
      "mut_score",
      [](py::array_t<double> audio, py::array_t<double> text, py::array_t<double> flipped) {
        return mut_score(matrix_from_array(std::move(audio)),
                         matrix_from_array(std::move(text)),
                         matrix_from_array(std::move(flipped)));
      },
      py::arg("audio"), py::arg("text_original"), py::arg("text_flipped"));
  m.def(
      "flip_modifiers",
      [](const std::string& caption) {
        const auto r = flip_modifiers(caption, ModifierLexicon::default_lexicon());
        std::vector<std::string> categories;
        for (auto c : r.categories_hit) categories.emplace_back(modifier_category_name(c));
        return py::make_tuple(r.flipped, categories);
      },
      py::arg("caption"), "Returns (flipped_caption, categories_hit)");
  m.def(
      "modifier_stats",
      [](const std::vector<std::string>& captions) {
        py::dict out;
        for (const auto& [cat, stat] :
             modifier_stats(captions, ModifierLexicon::default_lexicon())) {
          out[modifier_category_name(cat)] = py::make_tuple(stat.count, stat.percent);
        }
        return out;
      },
      py::arg("captions"), "Per category: (count, percent)");

  m.attr("PIPELINE_RATE") = kPipelineRate;
  m.attr("__version__") = "0.1.0";
}
