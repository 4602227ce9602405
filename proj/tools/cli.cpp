#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "simlm/counts_io.hpp"
#include "simlm/errors.hpp"
#include "simlm/eval.hpp"
#include "simlm/lattice.hpp"
#include "simlm/suite.hpp"
#include "simlm/synthetic.hpp"

namespace simlm::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string counts;
  std::string scheme = "sim";
  std::string format = "text";
  std::string kl_mode = "exact";
  std::string lambdas;
  Count min_bigram_count = 2;
  std::string discount_ceiling = "5";
  int k = 60;
  double t = 2.5;
  double beta = 4.0;
  double gamma = 0.15;
  double lm_weight = 1.0;
  unsigned threads = 1;
  std::uint64_t seed = 1;

  std::string train, out, tune, test, lattice_dir, word, w1, w2;
  int min_word_count = 1;
  bool compare = false;
  std::vector<int> k_grid;
  std::vector<double> t_grid, beta_grid, gamma_grid;

  std::size_t train_sentences = 4000, tune_sentences = 500, test_sentences = 500;
  std::size_t lattices = 200;
  double margin = 0.5;
  double confusion_rate = 0.5;
  double held_out = 0.2;
  int classes = 4, words_per_class = 25;
};

void require_file(const std::string &path, const char *what) {
  if (path.empty()) throw ConfigError(std::string("missing --") + what);
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + std::string(what) + " file '" + path + "'");
}

Count parse_ceiling(const std::string &s) {
  if (s == "inf" || s == "none") return kNoCeiling;
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception &) {
  }
  throw ConfigError("bad --discount-ceiling '" + s + "'");
}

std::array<double, 3> parse_lambdas(const std::string &s) {
  std::array<double, 3> l{};
  std::size_t i = 0, start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    std::string field = s.substr(start, comma == std::string::npos ? comma : comma - start);
    if (i >= 3) throw ConfigError("--lambdas takes exactly three values");
    try {
      std::size_t pos = 0;
      l[i++] = std::stod(field, &pos);
      if (pos != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception &) {
      throw ConfigError("bad --lambdas value '" + field + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (i != 3) throw ConfigError("--lambdas takes exactly three values");
  return l;
}

SuiteConfig suite_config(const Options &o) {
  SuiteConfig c;
  c.backoff.min_bigram_count = o.min_bigram_count;
  c.backoff.discount_ceiling = parse_ceiling(o.discount_ceiling);
  c.backoff.validate();
  c.similarity = {o.k, o.t, o.beta, o.gamma};
  c.similarity.validate();
  if (o.kl_mode == "exact")
    c.kl_mode = KlMode::kExact;
  else if (o.kl_mode == "truncated")
    c.kl_mode = KlMode::kTruncated;
  else
    throw ConfigError("unknown --kl-mode '" + o.kl_mode + "'");
  if (!o.lambdas.empty()) c.lambdas = parse_lambdas(o.lambdas);
  return c;
}

std::shared_ptr<const CorpusCounts> load_counts(const Options &o) {
  require_file(o.counts, "counts");
  return std::make_shared<const CorpusCounts>(read_counts_file(o.counts));
}

std::vector<Sentence> load_text(const std::string &path, const char *what, const Vocabulary &v) {
  require_file(path, what);
  auto lines = read_sentences_file(path);
  return map_sentences(lines, v);
}

WordId known_word(const Vocabulary &v, const std::string &w, const char *what) {
  if (w.empty()) throw ConfigError(std::string("missing --") + what);
  auto id = v.find(w);
  if (!id) throw ConfigError("word '" + w + "' is not in the vocabulary");
  return *id;
}

void cmd_train(const Options &o, std::ostream &out) {
  require_file(o.train, "train");
  if (o.out.empty()) throw ConfigError("missing --out");
  auto lines = read_sentences_file(o.train);
  auto counts = build_counts(lines, o.min_word_count, o.threads);
  write_counts_file(o.out, counts.vocab, counts.table);
  auto fof = counts_of_counts(counts.table);
  fmt::print(out, "vocab_size {}\nbigrams {}\nbigram_types {}\nsingletons {}\n",
             counts.vocab.size(), counts.table.total_bigrams(), counts.table.bigram_types(),
             fof(1));
}

void cmd_eval(const Options &o, std::ostream &out) {
  const Format format = parse_format(o.format);
  const Scheme scheme = parse_scheme(o.scheme);
  auto config = suite_config(o);
  auto data = load_counts(o);
  auto test = load_text(o.test, "test", data->vocab);
  ModelSuite suite(data, config);
  if (o.compare) {
    std::vector<NamedModel> models{{"katz", &suite.katz()}, {"sim", &suite.sim()},
                                   {"cooc", &suite.cooc()}};
    write_comparison(out, compare(models, suite.model(), test), format);
    return;
  }
  std::vector<PerplexityReport> reports{
      perplexity(suite.get(scheme), suite.model(), test, scheme_name(scheme))};
  write_reports(out, reports, format);
}

void cmd_tune(const Options &o, std::ostream &out) {
  const Format format = parse_format(o.format);
  auto config = suite_config(o);
  auto data = load_counts(o);
  auto tune = load_text(o.tune, "tune", data->vocab);
  auto test = load_text(o.test, "test", data->vocab);
  ModelSuite suite(data, config);
  ParamGrid grid;
  if (!o.k_grid.empty()) grid.k = o.k_grid;
  if (!o.t_grid.empty()) grid.t = o.t_grid;
  if (!o.beta_grid.empty()) grid.beta = o.beta_grid;
  if (!o.gamma_grid.empty()) grid.gamma = o.gamma_grid;
  write_grid(out, grid_search(grid, suite.index(), tune, test, o.threads), format);
}

void cmd_neighbors(const Options &o, std::ostream &out) {
  auto config = suite_config(o);
  auto data = load_counts(o);
  WordId w = known_word(data->vocab, o.word, "word");
  ModelSuite suite(data, config);
  auto set = neighbor_set(w, config.similarity, suite.index());
  for (std::size_t i = 0; i < set.neighbors.size(); ++i) {
    const auto &n = set.neighbors[i];
    fmt::print(out, "{} {} {:.6f} {:.6f}\n", i + 1, data->vocab.word(n.word), n.distance, n.weight);
  }
}

void cmd_prob(const Options &o, std::ostream &out) {
  const Format format = parse_format(o.format);
  auto config = suite_config(o);
  auto data = load_counts(o);
  WordId w1 = known_word(data->vocab, o.w1, "w1");
  WordId w2 = known_word(data->vocab, o.w2, "w2");
  ModelSuite suite(data, config);
  const bool seen = suite.model().is_seen(w1, w2);
  const double katz = suite.katz().prob(w1, w2);
  const double sim = suite.sim().prob(w1, w2);
  const double cooc = suite.cooc().prob(w1, w2);
  if (format == Format::kCsv) {
    out << "w1,w2,seen,katz,sim,cooc\n";
    fmt::print(out, "{},{},{},{:.10g},{:.10g},{:.10g}\n", o.w1, o.w2, seen ? 1 : 0, katz, sim, cooc);
  } else {
    fmt::print(out, "{:<16} {:<16} {:>4} {:>16} {:>16} {:>16}\n", "w1", "w2", "seen", "katz", "sim",
               "cooc");
    fmt::print(out, "{:<16} {:<16} {:>4} {:>16.10g} {:>16.10g} {:>16.10g}\n", o.w1, o.w2,
               seen ? "yes" : "no", katz, sim, cooc);
  }
}

void cmd_rescore(const Options &o, std::ostream &out, std::ostream &err) {
  const Format format = parse_format(o.format);
  const Scheme scheme = parse_scheme(o.scheme);
  auto config = suite_config(o);
  auto data = load_counts(o);
  if (o.lattice_dir.empty()) throw ConfigError("missing --lattice-dir");
  std::error_code ec;
  if (!fs::is_directory(o.lattice_dir, ec))
    throw IoError("cannot read lattice directory '" + o.lattice_dir + "'");
  std::vector<fs::path> paths;
  for (const auto &entry : fs::directory_iterator(o.lattice_dir))
    if (entry.is_regular_file()) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<LatticeFile> lattices;
  for (const auto &p : paths) {
    lattices.push_back(read_lattice_file(p.string(), data->vocab));
    for (const auto &w : lattices.back().warnings) err << p.filename().string() << ": " << w << '\n';
  }
  ModelSuite suite(data, config);
  auto r = disagreement_report(lattices, suite.get(scheme), suite.katz(), o.lm_weight, o.threads);
  if (format == Format::kCsv) {
    out << "lattices,model_a,model_b,disagreements,model_a_correct,model_b_correct,sign_test_p\n";
    fmt::print(out, "{},{},katz,{},{},{},{:.6g}\n", lattices.size(), scheme_name(scheme),
               r.disagreements, r.model_a_correct, r.model_b_correct, r.sign_test_p);
  } else {
    fmt::print(out, "lattices        {}\nmodel_a         {}\nmodel_b         katz\n",
               lattices.size(), scheme_name(scheme));
    fmt::print(out, "disagreements   {}\nmodel_a_correct {}\nmodel_b_correct {}\nsign_test_p     {:.6g}\n",
               r.disagreements, r.model_a_correct, r.model_b_correct, r.sign_test_p);
  }
}

void write_lines(const fs::path &path, const std::vector<std::string> &lines) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  for (const auto &l : lines) f << l << '\n';
  if (!f) throw IoError("error writing " + path.string());
}

void cmd_gen(const Options &o, std::ostream &out) {
  if (o.out.empty()) throw ConfigError("missing --out");
  PlantedConfig pc;
  pc.classes = o.classes;
  pc.words_per_class = o.words_per_class;
  pc.held_out_fraction = o.held_out;
  PlantedModel planted(pc, o.seed);
  auto corpus = generate_corpus(planted, o.train_sentences, o.tune_sentences, o.test_sentences,
                                o.seed + 1);
  LatticeGenConfig lc;
  lc.margin = o.margin;
  lc.confusion_rate = o.confusion_rate;
  auto lattices = generate_lattices(planted, o.lattices, lc, o.seed + 2);

  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir / "lattices", ec);
  if (ec) throw IoError("cannot create " + (dir / "lattices").string());
  write_lines(dir / "train.txt", corpus.train);
  write_lines(dir / "tune.txt", corpus.tune);
  write_lines(dir / "test.txt", corpus.test);
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    std::ofstream f(dir / "lattices" / fmt::format("lat{:04}.txt", i), std::ios::binary);
    if (!f) throw IoError("cannot write lattice files under " + dir.string());
    f << lattices[i];
  }
  fmt::print(out, "seed {}\ntrain_sentences {}\ntune_sentences {}\ntest_sentences {}\nlattices {}\n",
             o.seed, corpus.train.size(), corpus.tune.size(), corpus.test.size(), lattices.size());
}

void add_model_options(CLI::App *app, Options &o) {
  app->add_option("--counts", o.counts, "Counts file written by 'train'");
  app->add_option("--scheme", o.scheme, "katz | sim | cooc")->capture_default_str();
  app->add_option("--min-bigram-count", o.min_bigram_count,
                  "Bigrams counted fewer times are treated as unseen")
      ->capture_default_str();
  app->add_option("--discount-ceiling", o.discount_ceiling,
                  "Counts at or above this are not discounted ('inf' for none)")
      ->capture_default_str();
  app->add_option("--k", o.k, "Maximum number of neighbors")->capture_default_str();
  app->add_option("--t", o.t, "KL distance threshold (base 10)")->capture_default_str();
  app->add_option("--beta", o.beta, "Neighbor weight decay (base 10)")->capture_default_str();
  app->add_option("--gamma", o.gamma, "Unigram interpolation weight")->capture_default_str();
  app->add_option("--lambdas", o.lambdas,
                  "a,b,c: interpolate MLE bigram, cooc and unigram for --scheme cooc");
  app->add_option("--kl-mode", o.kl_mode, "exact | truncated")->capture_default_str();
  app->add_option("--format", o.format, "text | csv")->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Bigram language models with similarity-based estimates for unseen bigrams",
               "simlm"};
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  auto *train = app.add_subcommand("train", "Count bigrams in a training text");
  train->add_option("--train", o.train, "Training text, one sentence per line");
  train->add_option("--out", o.out, "Counts file to write");
  train->add_option("--min-word-count", o.min_word_count, "Rarer words map to <unk>")
      ->capture_default_str();
  train->add_option("--threads", o.threads, "Worker threads")->capture_default_str();

  auto *eval = app.add_subcommand("eval", "Perplexity of a test text");
  add_model_options(eval, o);
  eval->add_option("--test", o.test, "Test text");
  eval->add_flag("--compare", o.compare, "Report katz, sim and cooc side by side");

  auto *tune = app.add_subcommand("tune", "Grid search over k, t, beta and gamma");
  add_model_options(tune, o);
  tune->add_option("--tune", o.tune, "Tuning text");
  tune->add_option("--test", o.test, "Test text");
  tune->add_option("--k-grid", o.k_grid, "Values of k")->delimiter(',');
  tune->add_option("--t-grid", o.t_grid, "Values of t")->delimiter(',');
  tune->add_option("--beta-grid", o.beta_grid, "Values of beta")->delimiter(',');
  tune->add_option("--gamma-grid", o.gamma_grid, "Values of gamma")->delimiter(',');

  auto *neighbors = app.add_subcommand("neighbors", "Nearest conditioning words of a word");
  add_model_options(neighbors, o);
  neighbors->add_option("--word", o.word, "Conditioning word");

  auto *prob = app.add_subcommand("prob", "P(w2 | w1) under every scheme");
  add_model_options(prob, o);
  prob->add_option("--w1", o.w1, "Conditioning word");
  prob->add_option("--w2", o.w2, "Conditioned word");

  auto *rescore = app.add_subcommand("rescore", "Lattice disagreements between --scheme and katz");
  add_model_options(rescore, o);
  rescore->add_option("--lattice-dir", o.lattice_dir, "Directory of lattice files");
  rescore->add_option("--lm-weight", o.lm_weight, "Weight of the LM score")->capture_default_str();

  auto *gen = app.add_subcommand("gen", "Write a synthetic class-structured data set");
  gen->add_option("--out", o.out, "Output directory");
  gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen->add_option("--train-sentences", o.train_sentences)->capture_default_str();
  gen->add_option("--tune-sentences", o.tune_sentences)->capture_default_str();
  gen->add_option("--test-sentences", o.test_sentences)->capture_default_str();
  gen->add_option("--lattices", o.lattices)->capture_default_str();
  gen->add_option("--margin", o.margin, "Acoustic advantage of corrupted words")
      ->capture_default_str();
  gen->add_option("--confusion-rate", o.confusion_rate)->capture_default_str();
  gen->add_option("--held-out", o.held_out, "Fraction of pair types kept out of training")
      ->capture_default_str();
  gen->add_option("--classes", o.classes)->capture_default_str();
  gen->add_option("--words-per-class", o.words_per_class)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::Success &) {
    return kOk;
  } catch (const CLI::FileError &e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*train) cmd_train(o, out);
    else if (*eval) cmd_eval(o, out);
    else if (*tune) cmd_tune(o, out);
    else if (*neighbors) cmd_neighbors(o, out);
    else if (*prob) cmd_prob(o, out);
    else if (*rescore) cmd_rescore(o, out, err);
    else if (*gen) cmd_gen(o, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace simlm::cli
