// Copyright 2026 The AAOG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aaog/appearance.h"
#include "aaog/evaluation.h"
#include "aaog/grammar.h"
#include "aaog/inference.h"
#include "aaog/json_io.h"
#include "aaog/learning.h"
#include "aaog/svg.h"
#include "aaog/synthetic.h"

namespace aaog::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string ConfigScalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw CLI::ConversionError("config values must be strings, numbers, "
                             "booleans or arrays");
}

bool GivenOnCommandLine(const std::vector<std::string>& args,
                        const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Expands `--config file.json` into flags of the selected subcommand. Keys are
// long flag names without dashes; keys already given as flags are skipped.
std::vector<std::string> ExpandConfig(const CLI::App& app,
                                      std::vector<std::string> args) {
  if (args.empty()) return args;
  const CLI::App* sub = nullptr;
  for (const auto* s : app.get_subcommands({})) {
    if (s->get_name() == args[0]) sub = s;
  }
  if (sub == nullptr) return args;

  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CLI::ConversionError("config file is not valid JSON: " +
                               std::string(e.what()));
  }
  if (!j.is_object()) {
    throw CLI::ConversionError("config file must hold a JSON object");
  }

  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || key == "config") {
      throw CLI::ConversionError("unknown config key '" + key + "' for " +
                                 sub->get_name());
    }
    if (GivenOnCommandLine(args, flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (!value.is_boolean()) {
        throw CLI::ConversionError("config key '" + key + "' must be boolean");
      }
      if (value.get<bool>()) extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) extra.push_back(ConfigScalar(v));
    } else {
      extra.push_back(ConfigScalar(value));
    }
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

std::string SchemaFooter() {
  std::ostringstream ss;
  ss << "Schema versions: grammar " << kGrammarSchemaVersion << ", models "
     << kModelsSchemaVersion << ", parse " << kParseSchemaVersion
     << ", proposals " << kProposalsSchemaVersion << ", annotations "
     << kAnnotationSchemaVersion << ", scene " << kSceneSchemaVersion
     << ", report " << kReportSchemaVersion;
  return ss.str();
}

void AddConfig(CLI::App* sub) {
  sub->add_option("--config",
                   "JSON object mirroring this command's flags; flags given "
                   "on the command line win");
}

AOGrammar LoadGrammarOrDefault(const std::string& path) {
  AOGrammar g = path.empty() ? BuildDefaultHumanGrammar(DefaultAttributes())
                             : GrammarFromJson(ReadTextFile(path));
  const auto report = Validate(g);
  if (!report.ok()) {
    throw ValidationError("invalid grammar:\n" + report.ToString());
  }
  return g;
}

RelationModels LoadModels(const std::string& path, const AOGrammar& grammar) {
  RelationModels models = ModelsFromJson(ReadTextFile(path), grammar);
  const auto problems = ValidateModels(grammar, models);
  if (!problems.empty()) {
    throw ValidationError("invalid models: " + problems.front());
  }
  return models;
}

std::vector<Annotation> LoadAnnotations(const std::string& path,
                                        const AOGrammar& grammar) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadAnnotations(in, grammar);
}

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

std::string SceneStem(int index) {
  std::ostringstream ss;
  ss << "scene_" << std::setw(4) << std::setfill('0') << index;
  return ss.str();
}

std::vector<fs::path> SortedFiles(const fs::path& dir, std::string_view ext) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string grammar;
  std::string models;
};

int RunValidate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const AOGrammar g = GrammarFromJson(ReadTextFile(a.grammar));
  const auto report = Validate(g);
  ordered_json j;
  j["grammar_ok"] = report.ok();
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        {{"kind", std::string(ViolationKindName(v.kind))}, {"message", v.message}});
  }
  j["violations"] = std::move(violations);
  bool ok = report.ok();
  if (!a.models.empty() && report.ok()) {
    const auto problems =
        ValidateModels(g, ModelsFromJson(ReadTextFile(a.models), g));
    j["models_ok"] = problems.empty();
    j["model_problems"] = problems;
    ok = ok && problems.empty();
  }
  out << j.dump(2) << "\n";
  if (!ok) err << "validation failed\n";
  return ok ? kExitOk : kExitError;
}

// ---- learn -----------------------------------------------------------------

struct LearnArgs {
  std::string annotations;
  std::string proposals;
  std::string grammar;
  int components = 10;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double tol = 1e-6;
  double alpha = 1.0;
  std::string out;
};

int RunLearn(const LearnArgs& a, std::ostream& out, std::ostream& err) {
  const AOGrammar g = LoadGrammarOrDefault(a.grammar);
  const auto anns = LoadAnnotations(a.annotations, g);
  std::map<std::string, std::vector<Proposal>> by_image;
  if (!a.proposals.empty()) {
    for (const auto& ann : anns) {
      if (by_image.contains(ann.image)) continue;
      const fs::path file = fs::path(a.proposals) / (ann.image + ".jsonl");
      if (!fs::exists(file)) continue;
      const ProposalSet set = LoadProposals(file, g);
      auto& list = by_image[ann.image];
      for (ProposalId id : set.order()) list.push_back(set.Get(id));
    }
  }
  LearnOptions opts;
  opts.em.n_components = a.components;
  opts.em.seed = a.seed;
  opts.em.max_iter = a.max_iter;
  opts.em.tol = a.tol;
  opts.syntactic_alpha = a.alpha;
  std::vector<std::string> warnings;
  const RelationModels models =
      LearnRelationModels(anns, by_image, g, opts, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  Emit(a.out, ModelsToJson(models, g), out);
  return kExitOk;
}

// ---- parse -----------------------------------------------------------------

struct ParseArgs {
  std::string grammar;
  std::string models;
  std::string proposals;
  std::string mode = "joint";
  int beam = kDefaultBeamWidth;
  bool no_syntactic = false;
  bool no_widening = false;
  std::string out;
  std::string scores_out;
};

std::string ValidateMode(const std::string& mode) {
  if (mode == "joint" || mode == "unconstrained") return "";
  if (mode.rfind("constrained:", 0) == 0) {
    const auto rest = mode.substr(12);
    const auto eq = rest.find('=');
    if (eq != std::string::npos && eq > 0 && eq + 1 < rest.size()) return "";
  }
  return "mode must be joint, unconstrained or constrained:ATTR=VALUE";
}

int RunParse(const ParseArgs& a, std::ostream& out, std::ostream& err) {
  const AOGrammar g = LoadGrammarOrDefault(a.grammar);
  const RelationModels models = LoadModels(a.models, g);
  const ProposalSet set = LoadProposals(a.proposals, g);
  BeamConfig config;
  config.beam_width = a.beam;
  config.use_syntactic = !a.no_syntactic;
  config.widening = !a.no_widening;

  ParseGraph pg;
  if (a.mode == "joint") {
    JointParse jp = SelectFinal(g, models, set, AllAttributeValues(g), config);
    if (!a.scores_out.empty()) {
      WriteTextFile(
          a.scores_out,
          AttributeScoresToJson(
              ComputeAttributeScores(jp.per_pair, set, models.association), g));
    }
    pg = std::move(jp.best);
  } else {
    if (!a.scores_out.empty()) {
      err << "--scores-out needs --mode joint\n";
      return kExitUsage;
    }
    if (a.mode == "unconstrained") {
      pg = ParseUnconstrained(g, models, set, config);
    } else {
      const auto rest = a.mode.substr(12);
      const auto eq = rest.find('=');
      const AttributeValue pair{rest.substr(0, eq), rest.substr(eq + 1)};
      if (!g.HasAttribute(pair.attr)) {
        throw ValidationError("unknown attribute '" + pair.attr + "'");
      }
      pg = ParseConstrained(g, models, set, pair, config);
    }
  }
  Emit(a.out, ParseGraphToJson(pg, g), out);
  return kExitOk;
}

// ---- eval-pcp --------------------------------------------------------------

struct EvalPcpArgs {
  std::string pred;
  std::string truth;
  std::string grammar;
  double threshold = 0.5;
  std::string out;
};

int RunEvalPcp(const EvalPcpArgs& a, std::ostream& out, std::ostream&) {
  const AOGrammar g = LoadGrammarOrDefault(a.grammar);
  const auto anns = LoadAnnotations(a.truth, g);
  if (anns.empty()) throw ValidationError("truth corpus is empty");
  const auto sticks = DefaultSticks(g);

  std::vector<std::pair<std::string, PcpResult>> results;
  if (fs::is_directory(a.pred)) {
    for (const auto& ann : anns) {
      const fs::path file = fs::path(a.pred) / (ann.image + ".json");
      const ParseGraph pg = ParseGraphFromJson(ReadTextFile(file), g);
      results.emplace_back(ann.image, StrictPcp(pg, ann, sticks, a.threshold));
    }
  } else {
    if (anns.size() != 1) {
      throw ValidationError(
          "a single prediction file needs a truth corpus with one record");
    }
    const ParseGraph pg = ParseGraphFromJson(ReadTextFile(a.pred), g);
    results.emplace_back(anns[0].image,
                         StrictPcp(pg, anns[0], sticks, a.threshold));
  }

  std::vector<int> correct(sticks.size(), 0), total(sticks.size(), 0);
  double sum = 0.0;
  ordered_json images = ordered_json::array();
  for (const auto& [image, r] : results) {
    sum += r.mean;
    for (std::size_t i = 0; i < sticks.size(); ++i) {
      if (!r.per_stick[i]) continue;
      ++total[i];
      if (*r.per_stick[i]) ++correct[i];
    }
    images.push_back({{"image", image}, {"pcp", r.mean}});
  }
  ordered_json j;
  j["threshold"] = a.threshold;
  j["pcp"] = sum / static_cast<double>(results.size());
  ordered_json per_stick = ordered_json::array();
  for (std::size_t i = 0; i < sticks.size(); ++i) {
    per_stick.push_back(
        {{"stick", g.NameOf(sticks[i].a) + "-" + g.NameOf(sticks[i].b)},
         {"evaluated", total[i]},
         {"pcp", total[i] == 0 ? 0.0
                               : static_cast<double>(correct[i]) / total[i]}});
  }
  j["stick_pcp"] = std::move(per_stick);
  j["images"] = std::move(images);
  Emit(a.out, j.dump(2) + "\n", out);
  return kExitOk;
}

// ---- eval-ap ---------------------------------------------------------------

struct EvalApArgs {
  std::string scores;
  std::string labels;
};

int RunEvalAp(const EvalApArgs& a, std::ostream& out, std::ostream&) {
  std::vector<double> scores;
  std::vector<bool> labels;
  try {
    scores = json::parse(ReadTextFile(a.scores)).get<std::vector<double>>();
    for (const auto& v : json::parse(ReadTextFile(a.labels))) {
      labels.push_back(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("expected JSON arrays: ") + e.what());
  }
  ordered_json j;
  j["ap"] = AveragePrecision(scores, labels);
  j["count"] = scores.size();
  out << j.dump(2) << "\n";
  return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string family = "two-person";
  int n = 100;
  std::uint64_t seed = 0;
  std::string out;
  double noise = 0.5;
  int clutter = 2;
};

int RunSynth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  const AOGrammar g = BuildDefaultHumanGrammar(DefaultAttributes());
  const auto family = ParseSceneFamily(a.family);
  const auto scenes = GenerateSceneFamily(g, family, a.n, a.seed);
  const fs::path dir(a.out);
  WriteTextFile(dir / "grammar.json", GrammarToJson(g));

  // Scores and annotation occlusion get their own streams derived from the
  // seed, so each scene's proposals depend only on (seed, index).
  std::mt19937_64 occlusion_rng(a.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Annotation> anns;
  for (int i = 0; i < a.n; ++i) {
    const std::string stem = SceneStem(i);
    WriteTextFile(dir / "scenes" / (stem + ".json"), SceneToJson(scenes[i], g));
    SynthOptions opts;
    opts.noise_sigma = a.noise;
    opts.clutter_per_part = a.clutter;
    opts.seed = a.seed + 1 + static_cast<std::uint64_t>(i);
    std::ostringstream props;
    WriteProposals(SynthScores(scenes[i], g, opts), g, props);
    WriteTextFile(dir / "proposals" / (stem + ".jsonl"), props.str());
    for (std::size_t k = 0; k < scenes[i].persons.size(); ++k) {
      anns.push_back(OccludedAnnotation(scenes[i], k, g, stem, occlusion_rng));
    }
  }
  std::ostringstream ann_text;
  WriteAnnotations(anns, g, ann_text);
  WriteTextFile(dir / "annotations.jsonl", ann_text.str());

  ordered_json manifest;
  manifest["family"] = a.family;
  manifest["n"] = a.n;
  manifest["seed"] = a.seed;
  manifest["noise"] = a.noise;
  manifest["clutter"] = a.clutter;
  WriteTextFile(dir / "synth.json", manifest.dump(2) + "\n");
  out << manifest.dump() << "\n";
  return kExitOk;
}

// ---- diag ------------------------------------------------------------------

struct DiagArgs {
  std::string scenes;
  std::string models;
  std::string grammar;
  std::vector<std::string> modes = {"joint", "no-attr", "no-pose"};
  int beam = kDefaultBeamWidth;
  double threshold = 0.5;
  std::string report;
};

int RunDiag(const DiagArgs& a, std::ostream& out, std::ostream&) {
  const fs::path dir(a.scenes);
  const AOGrammar g = LoadGrammarOrDefault(
      a.grammar.empty() && fs::exists(dir / "grammar.json")
          ? (dir / "grammar.json").string()
          : a.grammar);
  const RelationModels models = LoadModels(a.models, g);
  std::vector<DiagnosticCase> cases;
  for (const auto& file : SortedFiles(dir / "scenes", ".json")) {
    const fs::path props =
        dir / "proposals" / (file.stem().string() + ".jsonl");
    cases.push_back({SceneFromJson(ReadTextFile(file), g),
                     LoadProposals(props, g)});
  }
  DiagnosticConfig config;
  config.beam.beam_width = a.beam;
  config.pcp_threshold = a.threshold;
  config.modes.clear();
  for (const auto& m : a.modes) config.modes.push_back(ParseDiagMode(m));
  Emit(a.report, ReportToJson(RunDiagnostic(cases, g, models, config), g),
       out);
  return kExitOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::string grammar;
  std::string parse;
  std::string out;
};

int RunRender(const RenderArgs& a, std::ostream& out, std::ostream&) {
  const AOGrammar g = LoadGrammarOrDefault(a.grammar);
  const ParseGraph pg = ParseGraphFromJson(ReadTextFile(a.parse), g);
  Emit(a.out, RenderSvg(pg, g), out);
  return kExitOk;
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Attributed And-Or grammar: learning, joint pose/attribute "
               "parsing and evaluation",
               "aaog"};
  app.footer(SchemaFooter());
  app.require_subcommand(1);

  auto existing = CLI::ExistingFile;
  auto existing_dir = CLI::ExistingDirectory;

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a grammar (and models)");
  validate->add_option("--grammar", va.grammar, "Grammar JSON")
      ->required()
      ->check(existing);
  validate->add_option("--models", va.models, "Relation models JSON")
      ->check(existing);
  AddConfig(validate);

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Fit relation models");
  learn->add_option("--annotations", la.annotations, "Annotation JSON-lines")
      ->required()
      ->check(existing);
  learn->add_option("--proposals", la.proposals,
                    "Directory of <image>.jsonl proposal files")
      ->check(existing_dir);
  learn->add_option("--grammar", la.grammar, "Grammar JSON (default: human)")
      ->check(existing);
  learn->add_option("--components", la.components, "Mixture components")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn->add_option("--seed", la.seed, "EM seed")->required();
  learn->add_option("--max-iter", la.max_iter, "EM iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn->add_option("--tol", la.tol, "EM tolerance")->capture_default_str();
  learn->add_option("--alpha", la.alpha, "Co-occurrence smoothing")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn->add_option("--out", la.out, "Output models JSON (default stdout)");
  AddConfig(learn);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Parse one proposal set");
  parse->add_option("--grammar", pa.grammar, "Grammar JSON (default: human)")
      ->check(existing);
  parse->add_option("--models", pa.models, "Relation models JSON")
      ->required()
      ->check(existing);
  parse->add_option("--proposals", pa.proposals, "Proposal JSON-lines")
      ->required()
      ->check(existing);
  parse->add_option("--mode", pa.mode,
                    "joint | unconstrained | constrained:ATTR=VALUE")
      ->capture_default_str()
      ->check(CLI::Validator(ValidateMode, "MODE"));
  parse->add_option("--beam", pa.beam, "Beam width K")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  parse->add_flag("--no-syntactic", pa.no_syntactic,
                  "Drop part-type co-occurrence terms");
  parse->add_flag("--no-widening", pa.no_widening,
                  "Single beam of width K only");
  parse->add_option("--out", pa.out, "Output parse JSON (default stdout)");
  parse->add_option("--scores-out", pa.scores_out,
                    "Attribute scores JSON (joint mode)");
  AddConfig(parse);

  EvalPcpArgs ea;
  auto* eval_pcp = app.add_subcommand("eval-pcp", "Strict PCP of parses");
  eval_pcp->add_option("--pred", ea.pred,
                       "Parse JSON, or directory of <image>.json parses")
      ->required()
      ->check(CLI::ExistingPath);
  eval_pcp->add_option("--truth", ea.truth, "Annotation JSON-lines")
      ->required()
      ->check(existing);
  eval_pcp->add_option("--grammar", ea.grammar, "Grammar JSON (default: human)")
      ->check(existing);
  eval_pcp->add_option("--threshold", ea.threshold, "Fraction of stick length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_pcp->add_option("--out", ea.out, "Output JSON (default stdout)");
  AddConfig(eval_pcp);

  EvalApArgs apa;
  auto* eval_ap = app.add_subcommand("eval-ap", "Average precision");
  eval_ap->add_option("--scores", apa.scores, "JSON array of scores")
      ->required()
      ->check(existing);
  eval_ap->add_option("--labels", apa.labels, "JSON array of 0/1 or booleans")
      ->required()
      ->check(existing);
  AddConfig(eval_ap);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene family");
  synth->add_option("--family", sa.family, "single-person | two-person")
      ->capture_default_str()
      ->check(CLI::IsMember({"single-person", "two-person"}));
  synth->add_option("--n", sa.n, "Number of scenes")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", sa.seed, "Generator seed")->required();
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--noise", sa.noise, "Score noise std-dev")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--clutter", sa.clutter, "Clutter proposals per part")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  AddConfig(synth);

  DiagArgs da;
  auto* diag = app.add_subcommand("diag", "Joint vs. independent diagnostics");
  diag->add_option("--scenes", da.scenes, "Directory written by synth")
      ->required()
      ->check(existing_dir);
  diag->add_option("--models", da.models, "Relation models JSON")
      ->required()
      ->check(existing);
  diag->add_option("--grammar", da.grammar,
                   "Grammar JSON (default: <scenes>/grammar.json)")
      ->check(existing);
  diag->add_option("--modes", da.modes, "joint,no-attr,no-pose")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"joint", "no-attr", "no-pose"}));
  diag->add_option("--beam", da.beam, "Beam width K")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  diag->add_option("--threshold", da.threshold, "PCP threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  diag->add_option("--report", da.report, "Report JSON (default stdout)");
  AddConfig(diag);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Parse graph to SVG");
  render->add_option("--grammar", ra.grammar, "Grammar JSON (default: human)")
      ->check(existing);
  render->add_option("--parse", ra.parse, "Parse JSON")
      ->required()
      ->check(existing);
  render->add_option("--out", ra.out, "SVG path (default stdout)");
  AddConfig(render);

  try {
    const std::vector<std::string> expanded = ExpandConfig(app, args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return RunValidate(va, out, err);
    if (learn->parsed()) return RunLearn(la, out, err);
    if (parse->parsed()) return RunParse(pa, out, err);
    if (eval_pcp->parsed()) return RunEvalPcp(ea, out, err);
    if (eval_ap->parsed()) return RunEvalAp(apa, out, err);
    if (synth->parsed()) return RunSynth(sa, out, err);
    if (diag->parsed()) return RunDiag(da, out, err);
    if (render->parsed()) return RunRender(ra, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace aaog::cli
