// quizforge: lesson text in, cloze multiple-choice questions out.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "quizforge/api.hpp"
#include "quizforge/bank.hpp"
#include "quizforge/service.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnreadable = 2;
constexpr int kExitUsage = 64;

struct UnreadableInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string file;
  std::string gold;
  std::string title;
  std::size_t n = 1;
  std::size_t top_k = 5;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_questions;
  std::size_t min_sentence_len = 5;
  std::string stopwords;
  std::string out;
  std::string csv;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> subject;
  std::optional<std::string> session;
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return (v && *v) ? std::string(v) : fallback;
}

std::string read_input(const std::string& path) {
  try {
    return quizforge::read_file(path);
  } catch (const std::ios_base::failure&) {
    throw UnreadableInput("cannot read " + path);
  }
}

quizforge::PipelineOptions pipeline_options(const Flags& f) {
  quizforge::PipelineOptions p;
  if (!f.stopwords.empty()) {
    read_input(f.stopwords);
    p.stopwords = quizforge::StopWords::from_file(f.stopwords);
  }
  p.min_sentence_len = f.min_sentence_len;
  return p;
}

quizforge::RawMaterial load_material(const Flags& f) {
  auto body = read_input(f.file);
  if (!quizforge::utf8::is_valid(body))
    throw quizforge::Error(quizforge::ErrorCode::InvalidArgument, f.file + " is not valid UTF-8 text");
  const auto title = f.title.empty() ? std::filesystem::path(f.file).filename().string() : f.title;
  return quizforge::make_material(title, std::move(body));
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(f.out, std::ios::binary);
  if (!out) throw UnreadableInput("cannot write " + f.out);
  out << text;
}

int run_extract(const Flags& f) {
  const quizforge::Engine engine(pipeline_options(f));
  emit(f, quizforge::render(quizforge::to_json(engine.extract(load_material(f), {f.n, f.top_k}))));
  return 0;
}

int run_generate(const Flags& f) {
  const quizforge::Engine engine(pipeline_options(f));
  quizforge::GenerateRequest request;
  request.n = f.n;
  request.top_k = f.top_k;
  request.seed = f.seed;
  request.max_questions = f.max_questions;
  emit(f, quizforge::render(quizforge::to_json(engine.generate(load_material(f), request))));
  return 0;
}

int run_evaluate(const Flags& f) {
  const quizforge::Engine engine(pipeline_options(f));
  const auto material = load_material(f);
  const auto gold = quizforge::parse_gold(material.id, read_input(f.gold));
  const auto report = engine.evaluate(material, gold, {f.n, f.top_k});
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << quizforge::format_report(report) << '\n';
  if (!f.out.empty()) emit(f, quizforge::render(quizforge::to_json(report)));
  if (!f.csv.empty()) {
    Flags csv_out = f;
    csv_out.out = f.csv;
    emit(csv_out, quizforge::reports_csv({report}));
  }
  return 0;
}

int run_stats(const Flags& f) {
  const quizforge::Engine engine(pipeline_options(f));
  const auto stats = engine.stats(load_material(f));
  std::cout << quizforge::format_stats(stats) << '\n';
  if (!f.out.empty()) emit(f, quizforge::render(quizforge::to_json(stats)));
  return 0;
}

quizforge::Service* g_service = nullptr;

int run_serve(const Flags& f) {
  quizforge::Store store(env_or("QUIZFORGE_DB_PATH", "quizforge.db"));
  quizforge::Service service(store, quizforge::Engine(pipeline_options(f)), env_or("QUIZFORGE_UI_ORIGIN", "*"));
  g_service = &service;
  std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
  std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });
  std::cerr << "listening on " << f.host << ':' << f.port << '\n';
  if (!service.listen(f.host, f.port)) {
    std::cerr << "error: cannot listen on " << f.host << ':' << f.port << '\n';
    return kExitError;
  }
  return 0;
}

int run_export(const Flags& f) {
  quizforge::Store store(env_or("QUIZFORGE_DB_PATH", "quizforge.db"));
  emit(f, store.export_bank(quizforge::BankFilter{f.subject, f.session}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate cloze multiple-choice questions from plain-text lesson materials"};
  app.require_subcommand(1);
  Flags f;

  auto add_pipeline = [&](CLI::App* cmd) {
    cmd->add_option("--min-sentence-len", f.min_sentence_len, "drop sentences with fewer words")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stopwords", f.stopwords, "stop-word file, one word per line");
    cmd->add_option("--title", f.title, "material title (default: file name)");
  };
  auto add_extract = [&](CLI::App* cmd) {
    cmd->add_option("--n", f.n, "gram size")->check(CLI::PositiveNumber);
    cmd->add_option("--top-k", f.top_k, "keywords kept per sentence")->check(CLI::PositiveNumber);
  };

  auto* extract = app.add_subcommand("extract", "write the TF-IDF keyword dump");
  extract->add_option("file", f.file, "lesson material (UTF-8 text)")->required();
  add_extract(extract);
  add_pipeline(extract);
  extract->add_option("--out", f.out, "output file (default: stdout)");

  auto* generate = app.add_subcommand("generate", "write the question set");
  generate->add_option("file", f.file, "lesson material (UTF-8 text)")->required();
  add_extract(generate);
  add_pipeline(generate);
  generate->add_option("--seed", f.seed, "sampling seed (default: derived from the material)");
  generate->add_option("--max-questions", f.max_questions, "cap on generated questions")->check(CLI::PositiveNumber);
  generate->add_option("--out", f.out, "output file (default: stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "score extracted keywords against a gold list");
  evaluate->add_option("file", f.file, "lesson material (UTF-8 text)")->required();
  evaluate->add_option("--gold", f.gold, "gold keyword file, one per line")->required();
  add_extract(evaluate);
  add_pipeline(evaluate);
  evaluate->add_option("--out", f.out, "write the JSON report here");
  evaluate->add_option("--csv", f.csv, "write the CSV summary here");

  auto* stats = app.add_subcommand("stats", "print sentence length statistics");
  stats->add_option("file", f.file, "lesson material (UTF-8 text)")->required();
  add_pipeline(stats);
  stats->add_option("--out", f.out, "write the JSON statistics here");

  auto* serve = app.add_subcommand("serve", "run the HTTP service (QUIZFORGE_DB_PATH, QUIZFORGE_UI_ORIGIN)");
  serve->add_option("--port", f.port, "listen port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", f.host, "listen address");
  serve->add_option("--min-sentence-len", f.min_sentence_len, "drop sentences with fewer words")
      ->check(CLI::PositiveNumber);
  serve->add_option("--stopwords", f.stopwords, "stop-word file, one word per line");

  auto* exp = app.add_subcommand("export", "write the accepted question bank (QUIZFORGE_DB_PATH)");
  exp->add_option("--subject", f.subject, "only this subject");
  exp->add_option("--session", f.session, "only this session");
  exp->add_option("--out", f.out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*extract) return run_extract(f);
    if (*generate) return run_generate(f);
    if (*evaluate) return run_evaluate(f);
    if (*stats) return run_stats(f);
    if (*serve) return run_serve(f);
    if (*exp) return run_export(f);
  } catch (const UnreadableInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnreadable;
  } catch (const quizforge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
