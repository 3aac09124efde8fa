#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "seld/accddoa.hpp"
#include "seld/augment.hpp"
#include "seld/config.hpp"
#include "seld/error.hpp"
#include "seld/features.hpp"
#include "seld/image.hpp"
#include "seld/parallel.hpp"
#include "seld/projection.hpp"
#include "seld/synth.hpp"
#include "seld/tensor_io.hpp"

namespace seld::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config_path;
  int jobs = 1;
};

PipelineConfig load(const Globals& g) {
  PipelineConfig config = g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
  apply_env_overrides(config);
  return config;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first failure in
// index order is rethrown after all jobs finish.
void for_each_job(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<fs::path> expand_images(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && is_image_path(entry.path())) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      if (!fs::exists(p)) throw Error("no such file: " + p.string());
      files.push_back(p);
    }
  }
  return files;
}

fs::path suffixed(const fs::path& dir, const fs::path& file, const std::string& suffix) {
  return dir / (file.stem().string() + suffix + file.extension().string());
}

int frame_count(const std::vector<EventList>& lists) {
  int frames = 0;
  for (const auto& list : lists) {
    for (const Event& e : list) frames = std::max(frames, e.frame + 1);
  }
  return frames;
}

FoaClip slice_clip(const FoaClip& clip, std::size_t begin, std::size_t end) {
  FoaClip out;
  out.sample_rate = clip.sample_rate;
  for (std::size_t c = 0; c < 4; ++c) {
    out.channels[c].assign(clip.channels[c].begin() + static_cast<std::ptrdiff_t>(begin),
                           clip.channels[c].begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

SignalKind parse_signal(const std::string& name) {
  static const std::map<std::string, SignalKind> kinds = {{"white", SignalKind::white_noise},
                                                          {"speech", SignalKind::speech_like},
                                                          {"tone", SignalKind::tone},
                                                          {"impulse", SignalKind::impulse}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw Error("unknown signal '" + name + "' (white, speech, tone, impulse)");
  return it->second;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audio-visual SELD feature, augmentation, label and evaluation tools", "seld"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--jobs,-j", g.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::function<void()> action;

  // features
  auto* features = app.add_subcommand("features", "write one feature tensor per chunk of each WAV file");
  std::vector<std::string> feat_inputs;
  std::string feat_out;
  bool feat_dr = false, feat_train = false;
  features->add_option("inputs", feat_inputs, "FOA WAV files")->required()->check(CLI::ExistingFile);
  features->add_option("-o,--out", feat_out, "output directory")->required();
  features->add_flag("--dr", feat_dr, "append WPE direct and reverberant log-mels (9 channels)");
  features->add_flag("--train", feat_train, "use the training chunk hop instead of the evaluation hop");
  features->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      ensure_dir(feat_out);
      const ChunkSpec spec = feat_train ? config.train_chunks() : config.eval_chunks();
      struct Job {
        std::size_t file;
        std::size_t chunk;
        Chunk span;
      };
      std::vector<FoaClip> clips(feat_inputs.size());
      for_each_job(feat_inputs.size(), g.jobs, [&](std::size_t i) { clips[i] = read_foa_wav(feat_inputs[i]); });
      std::vector<Job> jobs;
      for (std::size_t i = 0; i < clips.size(); ++i) {
        clips[i].validate();
        const double total = static_cast<double>(clips[i].num_samples()) / clips[i].sample_rate;
        std::vector<Chunk> chunks;
        try {
          chunks = chunk_indices(total, spec);
        } catch (const Error& e) {
          throw Error(feat_inputs[i] + ": " + e.what());
        }
        for (std::size_t k = 0; k < chunks.size(); ++k) jobs.push_back({i, k, chunks[k]});
      }
      for_each_job(jobs.size(), g.jobs, [&](std::size_t j) {
        const Job& job = jobs[j];
        const FoaClip& clip = clips[job.file];
        const auto begin = static_cast<std::size_t>(std::llround(job.span.start_s * clip.sample_rate));
        const auto end = static_cast<std::size_t>(std::llround(job.span.end_s * clip.sample_rate));
        try {
          const FeatureStack stack = build_feature_stack(slice_clip(clip, begin, end), feat_dr, config.features);
          const fs::path src(feat_inputs[job.file]);
          write_tensor(fs::path(feat_out) / (src.stem().string() + "_c" + std::to_string(job.chunk) + ".tensor"),
                       stack.data);
        } catch (const Error& e) {
          throw Error(feat_inputs[job.file] + ", chunk " + std::to_string(job.chunk) + ": " + e.what());
        }
      });
      out << "wrote " << jobs.size() << " feature tensors to " << feat_out << '\n';
    };
  });

  // augment
  auto* augment = app.add_subcommand("augment", "apply one audio-visual channel swap to WAV, CSV and frames");
  int aug_id = 2;
  std::string aug_wav, aug_csv, aug_frames, aug_out;
  augment->add_option("--transform-id,-t", aug_id, "transform 0..7")->required()->check(CLI::Range(0, 7));
  augment->add_option("--wav", aug_wav, "FOA WAV file")->check(CLI::ExistingFile);
  augment->add_option("--csv", aug_csv, "metadata CSV")->check(CLI::ExistingFile);
  augment->add_option("--frames", aug_frames, "directory of equirectangular frames")->check(CLI::ExistingDirectory);
  augment->add_option("-o,--out", aug_out, "output directory")->required();
  augment->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      if (aug_wav.empty() && aug_csv.empty() && aug_frames.empty()) throw Error("augment needs --wav, --csv or --frames");
      ensure_dir(aug_out);
      const AcsTransform& t = acs_transform(aug_id);
      const std::string suffix = "_acs" + std::to_string(aug_id);
      if (!aug_wav.empty()) {
        write_foa_wav(suffixed(aug_out, aug_wav, suffix), acs_audio(read_foa_wav(aug_wav), t));
      }
      if (!aug_csv.empty()) {
        write_metadata_csv(suffixed(aug_out, aug_csv, suffix),
                           acs_labels(read_metadata_csv(aug_csv, config.distance_unit), t), config.distance_unit);
      }
      if (!aug_frames.empty()) {
        const fs::path dir = fs::path(aug_out) / (fs::path(aug_frames).lexically_normal().filename().string() + suffix);
        ensure_dir(dir);
        const auto files = expand_images({aug_frames});
        for_each_job(files.size(), g.jobs, [&](std::size_t i) {
          try {
            write_image(suffixed(dir, files[i], suffix), avcs_frame(read_image(files[i]), t));
          } catch (const Error& e) {
            throw Error(files[i].string() + ": " + e.what());
          }
        });
      }
    };
  });

  // project
  auto* project = app.add_subcommand("project", "convert equirectangular frames to horizontal cubemap strips");
  std::vector<std::string> proj_inputs;
  std::string proj_out;
  int face_size = kDefaultFaceSize;
  project->add_option("inputs", proj_inputs, "image files or directories")->required();
  project->add_option("-o,--out", proj_out, "output directory")->required();
  project->add_option("--face-size", face_size, "cube face edge in pixels")->check(CLI::PositiveNumber);
  project->callback([&] {
    action = [&] {
      load(g);
      ensure_dir(proj_out);
      const auto files = expand_images(proj_inputs);
      for_each_job(files.size(), g.jobs, [&](std::size_t i) {
        try {
          write_image(suffixed(proj_out, files[i], "_cube"), equirect_to_cubemap(read_image(files[i]), face_size));
        } catch (const Error& e) {
          throw Error(files[i].string() + ": " + e.what());
        }
      });
      out << "wrote " << files.size() << " cubemap strips to " << proj_out << '\n';
    };
  });

  // encode-labels
  auto* encode_cmd = app.add_subcommand("encode-labels", "encode a metadata CSV as an ACCDDOA tensor");
  std::string enc_csv, enc_out;
  int enc_frames = -1;
  encode_cmd->add_option("csv", enc_csv, "metadata CSV")->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("-o,--out", enc_out, "output tensor file")->required();
  encode_cmd->add_option("--frames", enc_frames, "label frames (default: last event frame + 1)");
  encode_cmd->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      const EventList events = read_metadata_csv(enc_csv, config.distance_unit);
      const int frames = enc_frames >= 0 ? enc_frames : frame_count({events});
      try {
        write_tensor(enc_out, to_tensor(encode(events, frames)));
      } catch (const Error& e) {
        throw Error(enc_csv + ": " + e.what());
      }
    };
  });

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "decode an ACCDDOA tensor to a prediction CSV");
  std::string dec_in, dec_out;
  decode_cmd->add_option("tensor", dec_in, "ACCDDOA tensor file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("-o,--out", dec_out, "prediction CSV")->required();
  decode_cmd->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      const auto frames = decode_all(from_tensor(read_tensor(fs::path(dec_in))), config.decode);
      write_prediction_csv(dec_out, flatten_frames(frames));
    };
  });

  // ensemble
  auto* ensemble = app.add_subcommand("ensemble", "fuse predictions");
  ensemble->require_subcommand(1);
  auto* temporal = ensemble->add_subcommand("temporal", "fuse overlapping window predictions (one CSV per window)");
  auto* models = ensemble->add_subcommand("models", "fuse per-model predictions of the same frames");
  std::vector<std::string> ens_inputs;
  std::string ens_out, ens_exceptions;
  double ens_hop = 1.0, ens_len = 3.0;
  int ens_frames = -1;
  temporal->add_option("inputs", ens_inputs, "window prediction CSVs in start order")->required()->check(CLI::ExistingFile);
  temporal->add_option("-o,--out", ens_out, "fused prediction CSV")->required();
  temporal->add_option("--hop", ens_hop, "window hop in seconds");
  temporal->add_option("--len", ens_len, "window length in seconds");
  temporal->add_option("--frames", ens_frames, "total label frames (default: end of the last window)");
  models->add_option("inputs", ens_inputs, "per-model prediction CSVs")->required()->check(CLI::ExistingFile);
  models->add_option("-o,--out", ens_out, "fused prediction CSV")->required();
  models->add_option("--exceptions", ens_exceptions, "classes needing a single vote, e.g. watertap,bell,knock");
  models->add_option("--frames", ens_frames, "total label frames (default: last frame + 1)");
  temporal->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      const ChunkSpec spec{ens_len, ens_hop, kLabelFps};
      spec.validate();
      const int window_frames = spec.label_frames();
      const int hop_frames = static_cast<int>(std::lround(ens_hop * kLabelFps));
      std::vector<WindowPrediction> windows;
      for (std::size_t k = 0; k < ens_inputs.size(); ++k) {
        const EventList events = read_event_csv(ens_inputs[k], config.distance_unit);
        try {
          windows.push_back({static_cast<int>(k) * hop_frames, group_by_frame(events, window_frames)});
        } catch (const Error& e) {
          throw Error(ens_inputs[k] + ": " + e.what());
        }
      }
      const int total = ens_frames >= 0 ? ens_frames
                                        : static_cast<int>(ens_inputs.size() - 1) * hop_frames + window_frames;
      write_prediction_csv(ens_out, flatten_frames(fuse_temporal(windows, total, config.ensemble)));
    };
  });
  models->callback([&] {
    action = [&] {
      PipelineConfig config = load(g);
      if (!ens_exceptions.empty()) set_config_value(config, "ensemble.exceptions", ens_exceptions);
      config.validate();
      std::vector<EventList> flat;
      for (const auto& path : ens_inputs) flat.push_back(read_event_csv(path, config.distance_unit));
      const int total = ens_frames >= 0 ? ens_frames : frame_count(flat);
      std::vector<std::vector<EventList>> per_model;
      for (std::size_t m = 0; m < flat.size(); ++m) {
        try {
          per_model.push_back(group_by_frame(flat[m], total));
        } catch (const Error& e) {
          throw Error(ens_inputs[m] + ": " + e.what());
        }
      }
      write_prediction_csv(ens_out, flatten_frames(fuse_models(per_model, config.ensemble)));
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions against references");
  std::string eval_pred, eval_ref, eval_report;
  int eval_frames = -1;
  eval->add_option("--pred", eval_pred, "prediction CSV (5 columns) or metadata CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--ref", eval_ref, "reference metadata CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--report", eval_report, "write key=value results here");
  eval->add_option("--frames", eval_frames, "label frames (default: last frame + 1)");
  eval->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      const EventList pred = read_event_csv(eval_pred, config.distance_unit);
      const EventList ref = read_event_csv(eval_ref, config.distance_unit);
      const int frames = eval_frames >= 0 ? eval_frames : frame_count({pred, ref});
      const EvalReport report = evaluate(group_by_frame(pred, frames), group_by_frame(ref, frames), config.metrics);
      out << format_table(report);
      if (!eval_report.empty()) write_text(eval_report, format_key_values(report));
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "generate test fixtures");
  synth->require_subcommand(1);
  auto* synth_audio = synth->add_subcommand("audio", "plane-wave FOA WAV with an optional reverb tail");
  auto* synth_marker = synth->add_subcommand("marker", "equirectangular image with one white pixel");
  std::string syn_out, syn_csv, syn_signal = "white";
  double syn_az = 0.0, syn_el = 0.0, syn_dist = 1.0, syn_dur = 3.0, syn_freq = 1000.0, syn_amp = 0.1;
  double syn_t60 = 0.0, syn_drr = 0.0, syn_onset = 0.05;
  std::uint64_t syn_seed = 1;
  int syn_class = 0, syn_width = 448;
  for (auto* cmd : {synth_audio, synth_marker}) {
    cmd->add_option("-o,--out", syn_out, "output file")->required();
    cmd->add_option("--az", syn_az, "azimuth, degrees");
    cmd->add_option("--el", syn_el, "elevation, degrees");
  }
  synth_audio->add_option("--distance", syn_dist, "source distance, meters");
  synth_audio->add_option("--duration", syn_dur, "seconds");
  synth_audio->add_option("--signal", syn_signal, "white, speech, tone or impulse");
  synth_audio->add_option("--seed", syn_seed, "generator seed");
  synth_audio->add_option("--freq", syn_freq, "tone frequency, Hz");
  synth_audio->add_option("--amplitude", syn_amp, "signal amplitude");
  synth_audio->add_option("--t60", syn_t60, "reverb decay time, seconds (0 = anechoic)");
  synth_audio->add_option("--drr", syn_drr, "direct-to-reverberant ratio, dB");
  synth_audio->add_option("--onset", syn_onset, "reverb tail onset, seconds");
  synth_audio->add_option("--csv", syn_csv, "also write a metadata CSV for the source");
  synth_audio->add_option("--class", syn_class, "class id for --csv")->check(CLI::Range(0, kNumClasses - 1));
  synth_marker->add_option("--width", syn_width, "image width (height is width / 2)");
  synth_audio->callback([&] {
    action = [&] {
      const PipelineConfig config = load(g);
      SourceSpec spec;
      spec.direction = {syn_az, syn_el};
      spec.distance = syn_dist;
      spec.signal = {parse_signal(syn_signal), syn_seed, syn_freq, syn_amp, 0.0};
      if (syn_t60 > 0.0) spec.reverb = ReverbSpec{syn_t60, syn_drr, syn_seed + 1, syn_onset};
      write_foa_wav(syn_out, plane_wave_foa(spec, syn_dur, config.sample_rate));
      if (!syn_csv.empty()) {
        EventList events;
        const int frames = static_cast<int>(std::floor(syn_dur * kLabelFps + 1e-9));
        const Direction d{wrap_azimuth(syn_az), syn_el};
        for (int f = 0; f < frames; ++f) events.push_back({f, syn_class, 0, d.azimuth, d.elevation, syn_dist});
        write_metadata_csv(fs::path(syn_csv), events, config.distance_unit);
      }
    };
  });
  synth_marker->callback([&] {
    action = [&] { write_image(syn_out, marker_image(syn_width, syn_width / 2, {syn_az, syn_el})); };
  });

  // config
  auto* config_cmd = app.add_subcommand("config", "print the effective configuration");
  config_cmd->callback([&] { action = [&] { out << dump_config(load(g)); }; });

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("seld");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    const int previous = max_threads();
    set_max_threads(g.jobs);
    struct Restore {
      int n;
      ~Restore() { set_max_threads(n); }
    } restore{previous};
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace seld::cli
