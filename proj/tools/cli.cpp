#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <pthread.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "vst/error.hpp"
#include "vst/numeric.hpp"
#include "vst/service.hpp"
#include "vst/session_store.hpp"

namespace vst::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Thrown for malformed --set / --retarget arguments.
struct EditError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad option values outside the edit flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::shared_ptr<const DesignDocument> read_document(const fs::path& path) {
  const std::string bytes = read_file(path);
  try {
    return std::make_shared<const DesignDocument>(parse_svg(bytes));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

fs::path directory_of(const fs::path& file) {
  fs::path dir = file.parent_path();
  return dir.empty() ? fs::path(".") : dir;
}

// Session files record input paths relative to their own directory so the
// pair can be moved together.
std::string relative_to(const fs::path& file, const fs::path& dir) {
  fs::path abs = fs::absolute(file).lexically_normal();
  fs::path rel = abs.lexically_relative(fs::absolute(dir).lexically_normal());
  return (rel.empty() ? abs : rel).generic_string();
}

fs::path resolve_from(const std::string& recorded, const fs::path& dir) {
  fs::path p(recorded);
  return p.is_absolute() ? p : dir / p;
}

struct ModelFlags {
  std::string weights;
  std::optional<double> align_epsilon;
  std::optional<double> contain_margin;
  std::string edges;

  void add_to(CLI::App* cmd, bool with_weights) {
    if (with_weights) {
      cmd->add_option("--weights", weights, "Similarity weights, e.g. color=1,structure=0");
    }
    cmd->add_option("--align-epsilon", align_epsilon, "Alignment tolerance in user units (default 2)");
    cmd->add_option("--contain-margin", contain_margin, "Containment margin in user units (default 0.5)");
    cmd->add_option("--edges", edges, "Comma-separated edge kinds to build (default all)");
  }

  SimilarityWeights similarity_weights() const {
    SimilarityWeights w;
    if (weights.empty()) return w;
    for (const std::string& item : split(weights, ',')) {
      auto kv = split(item, '=');
      auto value = kv.size() == 2 ? parse_number(kv[1]) : std::nullopt;
      if (!value) throw UsageError("--weights expects name=value pairs, got " + item);
      const std::string& key = kv[0];
      if (key == "color") w.color = *value;
      else if (key == "shape") w.shape = *value;
      else if (key == "size") w.size = *value;
      else if (key == "text") w.text = *value;
      else if (key == "structure") w.structure = *value;
      else throw UsageError("unknown weight " + key);
    }
    w.validate();
    return w;
  }

  GraphConfig graph_config() const {
    GraphConfig cfg;
    if (align_epsilon) cfg.align_epsilon = *align_epsilon;
    if (contain_margin) cfg.contain_margin = *contain_margin;
    if (!edges.empty()) {
      cfg.enabled_kinds.reset();
      for (const std::string& name : split(edges, ',')) {
        auto kind = parse_edge_kind(name);
        if (!kind) throw UsageError("unknown edge kind " + name);
        cfg.enabled_kinds.set(static_cast<size_t>(*kind));
      }
    }
    cfg.validate();
    return cfg;
  }
};

struct EditOp {
  enum Kind { CopyAll, CopyNone, Set, Retarget } kind;
  std::vector<std::string> args;
};

std::vector<std::string> id_list(const std::string& text, const char* flag) {
  std::vector<std::string> ids = split(text, ',');
  for (const std::string& id : ids) {
    if (id.empty()) throw EditError(std::string(flag) + ": empty element id in '" + text + "'");
  }
  return ids;
}

TransferSession apply_edit(const TransferSession& s, const EditOp& op) {
  switch (op.kind) {
    case EditOp::CopyAll: return copy_all(s);
    case EditOp::CopyNone: return copy_none(s);
    case EditOp::Retarget: {
      const std::string& spec = op.args[0];
      size_t eq = spec.rfind('=');
      if (eq == std::string::npos || eq + 1 == spec.size()) {
        throw EditError("--retarget expects targets=source, got '" + spec + "'");
      }
      return transfer_source_style(s, id_list(spec.substr(0, eq), "--retarget"), spec.substr(eq + 1));
    }
    case EditOp::Set: {
      if (op.args.size() != 3) throw EditError("--set expects TARGETS ATTRIBUTE STATE[,VALUE]");
      std::vector<std::string> targets = id_list(op.args[0], "--set");
      auto attr = parse_attribute_name(op.args[1]);
      if (!attr) throw EditError("--set: unknown attribute " + op.args[1]);
      const std::string& state_spec = op.args[2];
      size_t comma = state_spec.find(',');
      auto kind = parse_state_kind(std::string_view(state_spec).substr(0, comma));
      if (!kind) throw EditError("--set: unknown state in '" + state_spec + "'");
      AttributeState state{*kind, std::nullopt};
      if (*kind == StateKind::Custom) {
        if (comma == std::string::npos) throw EditError("--set: custom needs a value, e.g. custom,#ff0000");
        state.value = parse_attribute_value(*attr, std::string_view(state_spec).substr(comma + 1));
      } else if (comma != std::string::npos) {
        throw EditError("--set: only custom takes a value");
      }
      return set_state(s, targets, *attr, state);
    }
  }
  return s;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDocument:
    case ErrorCode::EmptySource:
    case ErrorCode::EmptyTarget: return kEmptyDocument;
    case ErrorCode::HashMismatch: return kHashMismatch;
    default: return kFailure;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_match(const std::string& source_path, const std::string& target_path, const std::string& out_path,
              const ModelFlags& flags, bool as_json, std::ostream& out) {
  SimilarityWeights weights = flags.similarity_weights();
  GraphConfig cfg = flags.graph_config();
  auto source = read_document(source_path);
  auto target = read_document(target_path);

  auto start = std::chrono::steady_clock::now();
  TransferSession session = make_session(source, target, weights, cfg);
  const double ms = elapsed_ms(start);

  const fs::path dir = directory_of(out_path);
  session.source_path = relative_to(source_path, dir);
  session.target_path = relative_to(target_path, dir);
  save_session(session, out_path);

  double sum = 0.0;
  double lowest = 1.0;
  for (const MatchEntry& m : session.correspondence.base) {
    sum += m.scores->combined;
    lowest = std::min(lowest, m.scores->combined);
  }
  const double mean = sum / static_cast<double>(session.correspondence.base.size());
  if (as_json) {
    out << json{{"command", "match"},
                {"sourceElements", source->elements.size()},
                {"targetElements", target->elements.size()},
                {"milliseconds", ms},
                {"meanScore", mean},
                {"minScore", lowest},
                {"session", out_path}}
               .dump()
        << "\n";
  } else {
    out << "source: " << source->elements.size() << " elements, target: " << target->elements.size()
        << " elements\n"
        << "matched in " << format_number(ms) << " ms\n"
        << "combined score: mean " << format_number(mean) << ", min " << format_number(lowest) << "\n"
        << "session written to " << out_path << "\n";
  }
  return kOk;
}

int cmd_transfer(const std::string& session_path, const std::vector<EditOp>& ops, const std::string& out_svg,
                 const std::string& session_out, bool as_json, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(session_path);
  const fs::path dir = directory_of(session_path);
  SessionInputs inputs = read_session_inputs(text);
  const fs::path source_file = resolve_from(inputs.source_path, dir);
  const fs::path target_file = resolve_from(inputs.target_path, dir);
  TransferSession session = restore_session(text, read_document(source_file), read_document(target_file));

  for (const EditOp& op : ops) {
    try {
      session = apply_edit(session, op);
    } catch (const Error& e) {
      err << "vst: " << e.what() << "\n";
      return kInvalidEdit;
    } catch (const EditError& e) {
      err << "vst: " << e.what() << "\n";
      return kInvalidEdit;
    }
  }

  std::vector<TransferWarning> warnings;
  DesignDocument output = apply_transfer(session, &warnings);
  for (const TransferWarning& w : warnings) {
    err << "warning: " << w.target << "." << attribute_name(w.attribute) << " is copied but " << w.source
        << " has no value; keeping the target's\n";
  }
  if (!out_svg.empty()) write_file(out_svg, serialize_svg(output));

  const std::string session_dest = session_out.empty() ? session_path : session_out;
  const fs::path dest_dir = directory_of(session_dest);
  session.source_path = relative_to(source_file, dest_dir);
  session.target_path = relative_to(target_file, dest_dir);
  save_session(session, session_dest);

  if (as_json) {
    out << json{{"command", "transfer"},
                {"edits", ops.size()},
                {"scriptEntries", session.script.size()},
                {"warnings", warnings.size()},
                {"output", out_svg},
                {"session", session_dest}}
               .dump()
        << "\n";
  } else {
    out << "applied " << ops.size() << " edit(s); script has " << session.script.size() << " entries\n";
    if (!out_svg.empty()) out << "output written to " << out_svg << "\n";
    out << "session written to " << session_dest << "\n";
  }
  return kOk;
}

int cmd_serve(const std::string& host, int port, const std::string& static_dir, std::ostream& out,
              std::ostream& err) {
  if (!static_dir.empty() && !fs::is_directory(static_dir)) {
    err << "vst: static directory not found: " << static_dir << "\n";
    return kFailure;
  }
  // Block the shutdown signals before any server thread exists so they all
  // inherit the mask; this thread takes them with sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  struct RestoreMask {
    sigset_t mask;
    ~RestoreMask() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
  } restore{previous};

  ServiceOptions options;
  options.static_dir = static_dir;
  SessionService service(options);
  int bound = 0;
  try {
    bound = service.bind(host, port);
  } catch (const Error& e) {
    err << "vst: " << e.what() << "\n";
    return kBindFailure;
  }
  out << "listening on http://" << host << ":" << bound << std::endl;
  std::thread server([&service] { service.run(); });
  int received = 0;
  sigwait(&signals, &received);
  service.stop();
  server.join();
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer visual styles between SVG designs", "vst"};
  app.require_subcommand(1);

  bool as_json = false;
  ModelFlags model;

  std::string source_path, target_path, out_path;
  CLI::App* match = app.add_subcommand("match", "Match a target design against a source and write a session");
  match->add_option("SOURCE", source_path, "Source SVG")->required();
  match->add_option("TARGET", target_path, "Target SVG")->required();
  match->add_option("-o,--output", out_path, "Session file to write")->required();
  match->add_flag("--json", as_json, "One-line JSON summary");
  model.add_to(match, true);

  std::string session_path, out_svg, session_out;
  std::vector<EditOp> ops;
  CLI::App* transfer =
      app.add_subcommand("transfer", "Edit a session's script left to right, then write the output SVG");
  transfer->add_option("SESSION", session_path, "Session file")->required();
  transfer
      ->add_flag_callback("--copy-all", [&] { ops.push_back({EditOp::CopyAll, {}}); },
                          "Copy every applicable attribute from the matched source")
      ->trigger_on_parse()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  transfer
      ->add_flag_callback("--copy-none", [&] { ops.push_back({EditOp::CopyNone, {}}); },
                          "Reset every attribute to the target's own")
      ->trigger_on_parse()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  transfer
      ->add_option_function<std::vector<std::string>>(
          "--set", [&](const std::vector<std::string>& args) { ops.push_back({EditOp::Set, args}); },
          "TARGETS ATTRIBUTE STATE[,VALUE]: state is copied, original or custom,<value>")
      ->type_name("TARGETS ATTRIBUTE STATE")
      ->expected(1, 3)
      ->trigger_on_parse();
  transfer
      ->add_option_function<std::string>(
          "--retarget", [&](const std::string& spec) { ops.push_back({EditOp::Retarget, {spec}}); },
          "T1[,T2...]=SOURCE: match targets to SOURCE and copy its styles")
      ->type_name("TARGETS=SOURCE")
      ->trigger_on_parse();
  transfer->add_option("-o,--output", out_svg, "Output SVG to write");
  transfer->add_option("--session-out", session_out, "Write the updated session here instead of in place");
  transfer->add_flag("--json", as_json, "One-line JSON summary");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host, "Interface to bind")->capture_default_str();
  serve->add_option("--port", port, "Port to listen on (0 picks one)")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Directory served at /");

  CLI::App* scores = app.add_subcommand("scores", "Print the full similarity matrix as CSV");
  scores->add_option("SOURCE", source_path, "Source SVG")->required();
  scores->add_option("TARGET", target_path, "Target SVG")->required();
  model.add_to(scores, true);

  std::string graph_path;
  CLI::App* graph = app.add_subcommand("graph", "Print a document's relationship edges");
  graph->add_option("SVG", graph_path, "SVG file")->required();
  model.add_to(graph, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*match) return cmd_match(source_path, target_path, out_path, model, as_json, out);
    if (*transfer) return cmd_transfer(session_path, ops, out_svg, session_out, as_json, out, err);
    if (*serve) return cmd_serve(host, port, static_dir, out, err);
    if (*scores) {
      SimilarityWeights w = model.similarity_weights();
      GraphConfig cfg = model.graph_config();
      auto src = read_document(source_path);
      auto tgt = read_document(target_path);
      out << score_matrix_csv(analyze(*src, cfg), analyze(*tgt, cfg), w);
      return kOk;
    }
    if (*graph) {
      GraphConfig cfg = model.graph_config();
      out << build_graph(*read_document(graph_path), cfg).dump();
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "vst: " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "vst: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kFailure;
}

}  // namespace vst::cli
