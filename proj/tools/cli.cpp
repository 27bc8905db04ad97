#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "lexpalo/corpus.hpp"
#include "lexpalo/error.hpp"
#include "lexpalo/experiments.hpp"
#include "lexpalo/genre_graph.hpp"
#include "lexpalo/lexstats.hpp"
#include "lexpalo/mnb.hpp"
#include "lexpalo/preprocess.hpp"
#include "lexpalo/random.hpp"
#include "lexpalo/vectorize.hpp"

namespace lexpalo::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kCorpusRow = "__corpus__";

struct Options {
  std::string corpus;
  std::string format = "auto";
  std::string output_dir = ".";
  std::string stopwords;
  std::string concat_map;
  std::size_t min_lyrics = 100;
  double gamma = 0.2;
  double alpha = 0.11;
  double train_fraction = 0.85;
  std::uint64_t seed = 0;
  std::size_t train_runs = 100;
  std::size_t sweep_runs = 200;
  std::size_t essential_runs = 500;
  double step = 0.005;
  std::size_t windows = 50;
  std::string linkage = "average";
  std::string essential_dir;
  std::string model;
  std::string text;
};

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += csv_field(fields[i]);
  }
  line.push_back('\n');
  return line;
}

std::string safe_file_part(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    out.push_back(c < 0x20 || c == '/' || c == '\\' || c == ':' ? '_' : static_cast<char>(c));
  }
  return out;
}

/// Reports go to a sibling temp file first and replace the target by rename.
class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    fs::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot write " + tmp.string());
      f << content;
      f.close();
      if (!f) throw IoError("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw IoError("cannot replace " + target.string());
    }
    ++written_;
  }

  const fs::path& path() const { return dir_; }
  std::size_t written() const { return written_; }

 private:
  fs::path dir_;
  std::size_t written_ = 0;
};

CorpusFormat resolve_format(const Options& o) {
  if (o.format != "auto") return parse_corpus_format(o.format);
  std::string ext = fs::path(o.corpus).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

PreprocessConfig make_config(const Options& o) {
  PreprocessConfig config = PreprocessConfig::defaults();
  config.gamma = o.gamma;
  if (!o.stopwords.empty()) config.stopwords = load_stopwords(o.stopwords);
  if (!o.concat_map.empty()) config.concat_map = load_concat_map(o.concat_map);
  config.validate();
  return config;
}

void check_common(const Options& o) {
  if (!(o.train_fraction > 0.0 && o.train_fraction < 1.0)) {
    throw InvalidArgumentError("--train-fraction must lie in (0, 1)");
  }
  if (!(o.alpha > 0.0)) throw AlphaNonPositiveError("--alpha must be positive");
}

struct Pipeline {
  Corpus raw;       // as loaded
  Corpus reduced;   // palos with at least min_lyrics records
  PreprocessConfig config;
  PreprocessReport report;
};

Pipeline run_pipeline(const Options& o) {
  PreprocessConfig config = make_config(o);
  Corpus raw = load_corpus(o.corpus, resolve_format(o));
  Corpus reduced = filter_top_palos(raw, o.min_lyrics);
  PreprocessReport report = preprocess_corpus_report(reduced, config);
  return {std::move(raw), std::move(reduced), std::move(config), std::move(report)};
}

std::string matrix_csv(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& m) {
  std::vector<std::string> header{"palo"};
  header.insert(header.end(), labels.begin(), labels.end());
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<std::string> row{labels[i]};
    for (double v : m[i]) row.push_back(num(v));
    out += csv_row(row);
  }
  return out;
}

std::string fit_row(const std::string& law, const std::optional<PowerLawFit>& fit) {
  if (!fit) return csv_row({law, "", "", "", "", "", ""});
  return csv_row({law, num(fit->exponent), num(fit->intercept), num(fit->r_squared), num(fit->range_min),
                  num(fit->range_max), std::to_string(fit->n_points)});
}

std::map<std::string, std::vector<std::string>> read_essential_dir(const fs::path& dir,
                                                                   const std::vector<std::string>& palos) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& palo : palos) {
    const fs::path file = dir / ("essential_" + safe_file_part(palo) + ".txt");
    if (!fs::exists(file)) continue;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());
    auto& words = out[palo];
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) words.push_back(line);
    }
  }
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const Pipeline p = run_pipeline(o);
  const Corpus& corpus = p.report.corpus;
  OutputDir dir(o.output_dir);

  const Corpus aggregates = aggregate_corpus(corpus);
  const std::vector<std::string> all_tokens = corpus_tokens(corpus);

  std::string profile_csv = csv_row({"palo", "tokens", "types", "ttr"});
  std::vector<std::vector<std::string>> palo_tokens;
  std::size_t window = SIZE_MAX;
  for (const auto& agg : aggregates.records()) {
    palo_tokens.push_back(split_tokens(agg.text));
    const LexicalProfile prof = profile(palo_tokens.back());
    profile_csv += csv_row({agg.palo, std::to_string(prof.tokens), std::to_string(prof.types), num(prof.ttr)});
    window = std::min(window, prof.tokens);
  }
  const LexicalProfile whole = profile(all_tokens);
  profile_csv +=
      csv_row({kCorpusRow, std::to_string(whole.tokens), std::to_string(whole.types), num(whole.ttr)});
  dir.write("profile.csv", profile_csv);

  // Every palo is sampled at the length of the smallest one; the corpus row is
  // the null model under the same protocol.
  std::string sttr_csv = csv_row({"palo", "window_length", "n_windows", "mean", "std_error"});
  auto sttr_line = [&](const std::string& label, const std::vector<std::string>& tokens) {
    const SttrResult r = sttr(tokens, window, o.windows, stratum_seed(o.seed, label));
    sttr_csv += csv_row({label, std::to_string(r.window_length), std::to_string(r.n_windows), num(r.mean),
                         num(r.std_error)});
  };
  for (std::size_t i = 0; i < aggregates.size(); ++i) sttr_line(aggregates[i].palo, palo_tokens[i]);
  sttr_line(kCorpusRow, all_tokens);
  dir.write("sttr.csv", sttr_csv);

  const auto essential = o.essential_dir.empty()
                             ? std::map<std::string, std::vector<std::string>>{}
                             : read_essential_dir(o.essential_dir, corpus.palos());
  const HapaxReport hapax = essential.empty() ? hapax_report(corpus) : hapax_report(corpus, essential);
  std::string hapax_csv = csv_row({"id", "palo", "palo_hapax_types", "types", "ratio"});
  for (const auto& s : hapax.per_song) {
    hapax_csv += csv_row({s.id, s.palo, std::to_string(s.palo_hapax_types), std::to_string(s.types), num(s.ratio)});
  }
  dir.write("hapax.csv", hapax_csv);

  std::string unique_csv = csv_row({"palo", "unique_types", "shared_with_essential"});
  for (const auto& [palo, words] : hapax.per_palo_unique) {
    const auto shared = hapax.shared_with_essential.find(palo);
    unique_csv += csv_row({palo, std::to_string(words.size()),
                           shared == hapax.shared_with_essential.end() ? "" : std::to_string(shared->second)});
  }
  dir.write("genre_unique.csv", unique_csv);

  std::string songs_csv = csv_row({"id", "palo", "tokens", "types"});
  for (const auto& rec : corpus.records()) {
    const auto tokens = split_tokens(rec.text);
    if (tokens.empty()) continue;
    const LexicalProfile prof = profile(tokens);
    songs_csv += csv_row({rec.id, rec.palo, std::to_string(prof.tokens), std::to_string(prof.types)});
  }
  dir.write("song_types.csv", songs_csv);

  // Zipf and Heaps look at everything that was loaded, before the palo-size
  // filter, with only the text normalization applied.
  PreprocessConfig bare = PreprocessConfig::bare();
  bare.gamma = o.gamma;
  const Corpus unfiltered = preprocess_corpus(p.raw, bare);

  const auto ranked = rank_frequencies(unfiltered);
  std::string zipf_csv = csv_row({"rank", "frequency", "word"});
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    zipf_csv += csv_row({std::to_string(i + 1), std::to_string(ranked[i].frequency), ranked[i].word});
  }
  dir.write("zipf.csv", zipf_csv);

  std::optional<PowerLawFit> zipf;
  try {
    zipf = zipf_fit(unfiltered);
  } catch (const DegenerateFitError& e) {
    err << "lexpalo: warning: no Zipf fit: " << e.what() << "\n";
  }

  std::optional<HeapsCurve> heaps;
  try {
    heaps = heaps_curve(unfiltered, o.seed);
  } catch (const DegenerateFitError& e) {
    err << "lexpalo: warning: no Heaps fit: " << e.what() << "\n";
  }
  std::string heaps_csv = csv_row({"tokens", "types"});
  if (heaps) {
    for (const auto& pt : heaps->points) heaps_csv += csv_row({std::to_string(pt.tokens), std::to_string(pt.types)});
  }
  dir.write("heaps.csv", heaps_csv);

  std::string fits_csv = csv_row({"law", "exponent", "intercept", "r_squared", "range_min", "range_max", "n_points"});
  fits_csv += fit_row("zipf", zipf);
  fits_csv += fit_row("heaps", heaps ? std::optional<PowerLawFit>(heaps->fit) : std::nullopt);
  dir.write("fits.csv", fits_csv);

  out << "stats: " << corpus.size() << " lyrics, " << aggregates.size() << " palos, " << whole.tokens
      << " tokens, " << whole.types << " types; " << dir.written() << " files in " << dir.path().string() << "\n";
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  check_common(o);
  if (o.train_runs == 0) throw InvalidArgumentError("--runs must be at least 1");
  const Pipeline p = run_pipeline(o);
  const Corpus& corpus = p.report.corpus;
  OutputDir dir(o.output_dir);

  const SplitSpec split{o.train_fraction, o.seed};
  const auto runs = run_trainings(corpus, o.alpha, o.train_runs, split);
  const AggregateReport agg = aggregate(runs);

  std::vector<std::string> header{"run", "seed", "global"};
  header.insert(header.end(), agg.classes.begin(), agg.classes.end());
  std::string acc_csv = csv_row(header);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), std::to_string(runs[i].seed), num(runs[i].global_accuracy)};
    for (double a : runs[i].per_class_accuracy) row.push_back(num(a));
    acc_csv += csv_row(row);
  }
  std::vector<std::string> mean_row{"mean", "", num(agg.mean_global_accuracy)};
  for (double a : agg.mean_accuracy) mean_row.push_back(num(a));
  acc_csv += csv_row(mean_row);
  dir.write("accuracy.csv", acc_csv);
  dir.write("confusion_mean.csv", matrix_csv(agg.classes, agg.mean_confusion));
  dir.write("confusion_only.csv", matrix_csv(agg.classes, agg.confusion_only));

  // The saved model is fit on the whole corpus, for `classify`.
  const Vocabulary vocab = build_vocabulary(corpus);
  const TfIdfMatrix matrix = tfidf(corpus, vocab);
  const auto labels = corpus.labels();
  const MnbModel model = fit(matrix, labels, o.alpha, vocab);
  std::ostringstream model_json;
  write_model_json(model_json, model, FrozenPreprocess{p.config, p.report.lowered_keys()});
  dir.write("model.json", model_json.str());

  out << "train: " << runs.size() << " runs, " << agg.classes.size() << " palos, alpha " << num(o.alpha)
      << ", mean accuracy " << num(agg.mean_global_accuracy) << "; " << dir.written() << " files in "
      << dir.path().string() << "\n";
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  check_common(o);
  if (o.sweep_runs == 0) throw InvalidArgumentError("--runs must be at least 1");
  const Pipeline p = run_pipeline(o);
  OutputDir dir(o.output_dir);

  const AlphaSweepResult r = alpha_sweep(p.report.corpus, o.step, o.sweep_runs, {o.train_fraction, o.seed});
  std::string csv = csv_row({"alpha", "mean_accuracy"});
  for (std::size_t g = 0; g < r.grid.size(); ++g) csv += csv_row({num(r.grid[g]), num(r.mean_accuracy[g])});
  dir.write("alpha_sweep.csv", csv);

  out << "sweep-alpha: " << r.grid.size() << " values x " << o.sweep_runs << " runs, best alpha "
      << num(r.best_alpha) << " (mean accuracy " << num(r.best_accuracy) << ")\n";
  return 0;
}

int cmd_essential(const Options& o, std::ostream& out) {
  check_common(o);
  const Pipeline p = run_pipeline(o);
  OutputDir dir(o.output_dir);

  const EssentialWordReport r =
      essential_words(p.report.corpus, o.alpha, o.essential_runs, {o.train_fraction, o.seed});
  std::string counts_csv = csv_row({"palo", "essential", "types", "normalized", "threshold_word"});
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    std::string words;
    for (const auto& w : r.per_palo[c]) words += w + "\n";
    dir.write("essential_" + safe_file_part(r.classes[c]) + ".txt", words);
    counts_csv += csv_row({r.classes[c], std::to_string(r.counts[c]), std::to_string(r.vocab_sizes[c]),
                           num(r.normalized[c]), r.threshold_word[c]});
  }
  dir.write("essential_counts.csv", counts_csv);

  std::size_t total = 0;
  for (auto n : r.counts) total += n;
  out << "essential: " << r.n_runs << " runs, " << r.classes.size() << " palos, " << total
      << " essential words; " << dir.written() << " files in " << dir.path().string() << "\n";
  return 0;
}

DistanceMatrix palo_distances(const Options& o) {
  const Pipeline p = run_pipeline(o);
  return distance_matrix(palo_vectors(p.report.corpus));
}

int cmd_distances(const Options& o, std::ostream& out) {
  const Linkage linkage = parse_linkage(o.linkage);
  const DistanceMatrix m = palo_distances(o);
  OutputDir dir(o.output_dir);

  dir.write("distances.csv", matrix_csv(m.labels, m.values));
  const Dendrogram d = hierarchical_cluster(m, linkage);
  dir.write("dendrogram.json", dendrogram_json(d));
  dir.write("network.dot", export_dot(complete_graph(m), m));
  const auto centrality = closeness_centrality(m);
  std::string c_csv = csv_row({"palo", "centrality"});
  for (std::size_t i = 0; i < m.size(); ++i) c_csv += csv_row({m.labels[i], num(centrality[i])});
  dir.write("centrality.csv", c_csv);

  const auto first = d.members(d.merges.front().id);
  out << "distances: " << m.size() << " palos, max distance " << num(m.max_off_diagonal()) << ", first merge {"
      << first.front() << "," << first.back() << "} (" << linkage_name(linkage) << "); " << dir.written()
      << " files in " << dir.path().string() << "\n";
  return 0;
}

int cmd_mst(const Options& o, std::ostream& out) {
  const DistanceMatrix m = palo_distances(o);
  OutputDir dir(o.output_dir);
  const GenreGraph tree = minimum_spanning_tree(m);
  dir.write("mst.dot", export_dot(tree, m));

  std::size_t hub = 0;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    if (tree.degree(i) > tree.degree(hub)) hub = i;
  }
  out << "mst: " << tree.edges.size() << " edges, total weight " << num(tree.total_weight()) << ", hub "
      << tree.nodes[hub] << " (degree " << tree.degree(hub) << "); written to "
      << (dir.path() / "mst.dot").string() << "\n";
  return 0;
}

int cmd_classify(const Options& o, bool write_report, std::ostream& out) {
  const auto [model, prep] = load_model(o.model);
  const auto tokens = preprocess_text(o.text, prep.config, prep.lowered_keys);
  const SparseRow row = tfidf_row(tokens, model.vocab());
  const ClassScores s = score(model, row);

  if (write_report) {
    OutputDir dir(o.output_dir);
    std::string csv = csv_row({"palo", "score"});
    for (std::size_t c = 0; c < model.classes().size(); ++c) csv += csv_row({model.classes()[c], num(s.scores[c])});
    dir.write("classification.csv", csv);
  }
  out << model.classes()[s.predicted] << "\n";
  return 0;
}

void add_corpus_options(CLI::App* sub, Options& o) {
  sub->add_option("--corpus", o.corpus, "Corpus file (JSONL or CSV with id, palo, text)")->required();
  sub->add_option("--format", o.format, "jsonl, csv or auto (by extension)")->capture_default_str();
  sub->add_option("--min-lyrics", o.min_lyrics, "Keep palos with at least this many lyrics")
      ->capture_default_str();
  sub->add_option("--gamma", o.gamma, "Case-normalization threshold")->capture_default_str();
  sub->add_option("--stopwords", o.stopwords, "Stop-word file replacing the bundled list");
  sub->add_option("--concat-map", o.concat_map, "Multiword file replacing the bundled map");
  sub->add_option("-o,--output-dir", o.output_dir, "Report directory")->capture_default_str();
}

void add_training_options(CLI::App* sub, Options& o) {
  sub->add_option("--alpha", o.alpha, "Lidstone smoothing")->capture_default_str();
  sub->add_option("--train-fraction", o.train_fraction, "Per-palo training share")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Lexical analysis and genre classification of Flamenco lyrics", "lexpalo"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.add_option("--seed", o.seed, "Master seed for every random draw")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Lexical profiles, sTTR, hapax, Zipf and Heaps tables");
  add_corpus_options(stats, o);
  stats->add_option("--windows", o.windows, "sTTR windows per palo")->capture_default_str();
  stats->add_option("--essential", o.essential_dir, "Directory of essential_<palo>.txt lists");

  auto* train = app.add_subcommand("train", "Repeated trainings: accuracy and confusion reports, model.json");
  add_corpus_options(train, o);
  add_training_options(train, o);
  train->add_option("--runs", o.train_runs, "Number of trainings")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-alpha", "Mean accuracy over a grid of smoothing values");
  add_corpus_options(sweep, o);
  sweep->add_option("--train-fraction", o.train_fraction, "Per-palo training share")->capture_default_str();
  sweep->add_option("--step", o.step, "Grid step")->capture_default_str();
  sweep->add_option("--runs", o.sweep_runs, "Trainings per grid value")->capture_default_str();

  auto* essential = app.add_subcommand("essential", "Essential words per palo");
  add_corpus_options(essential, o);
  add_training_options(essential, o);
  essential->add_option("--runs", o.essential_runs, "Number of trainings")->capture_default_str();

  auto* distances = app.add_subcommand("distances", "Cosine distances, dendrogram, network and centrality");
  add_corpus_options(distances, o);
  distances->add_option("--linkage", o.linkage, "average, single or complete")->capture_default_str();

  auto* mst = app.add_subcommand("mst", "Minimum spanning tree of the palo network");
  add_corpus_options(mst, o);

  auto* classify = app.add_subcommand("classify", "Predict the palo of one text with a saved model");
  classify->add_option("--model", o.model, "model.json written by train")->required();
  classify->add_option("--text", o.text, "Lyric text")->required();
  auto* classify_out = classify->add_option("-o,--output-dir", o.output_dir, "Write classification.csv here");

  // Seeds are accepted before or after the subcommand.
  for (auto* sub : {stats, train, sweep, essential, distances, mst}) {
    sub->add_option("--seed", o.seed, "Master seed for every random draw")->capture_default_str();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (train->parsed()) return cmd_train(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (essential->parsed()) return cmd_essential(o, out);
    if (distances->parsed()) return cmd_distances(o, out);
    if (mst->parsed()) return cmd_mst(o, out);
    if (classify->parsed()) return cmd_classify(o, classify_out->count() > 0, out);
  } catch (const FormatError& e) {
    err << "lexpalo: format error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    err << "lexpalo: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "lexpalo: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lexpalo::cli
