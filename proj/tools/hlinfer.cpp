#include <iostream>

#include <CLI11.hpp>

#include "hlinfer/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Headline inference engine and evaluator"};
  app.require_subcommand(1);

  hlinfer::cli::InferOptions infer;
  auto* infer_cmd = app.add_subcommand("infer", "Compute inferences for a dataset of parsed headlines");
  infer_cmd->add_option("--dataset", infer.dataset, "Dataset file, one '<headline> [source: ...]' per line")->required();
  infer_cmd->add_option("--parses", infer.parses, "CoNLL-U or Stanford JSON parses")->required();
  infer_cmd->add_option("--config", infer.config, "key=value run config");
  infer_cmd->add_option("--out", infer.out, "Output JSON Lines file")->required();
  infer_cmd->add_option("--rules", infer.rules, "Comma list of rule ids ('lexical' expands to all classes)");
  infer_cmd->add_flag("--strict", infer.strict, "Fail when a headline has no parse");
  infer_cmd->add_flag("--relaxed-nmod", infer.relaxed_nmod, "Let any nominal nmod produce '<dep> has <gov>'");

  hlinfer::cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score computed inferences against gold annotations");
  eval_cmd->add_option("--inferences", eval.inferences, "Inference JSON Lines from 'infer'")->required();
  eval_cmd->add_option("--gold", eval.gold, "Gold annotation file")->required();
  eval_cmd->add_option("--labels", eval.labels, "Incorrect-labels JSON Lines");
  eval_cmd->add_option("--config", eval.config, "key=value run config");
  eval_cmd->add_option("--out", eval.out, "Report JSON");
  eval_cmd->add_option("--tsv", eval.tsv, "Per-trigger TSV table");
  eval_cmd->add_option("--match-mode", eval.match_mode, "exact or jaccard")
      ->check(CLI::IsMember({"exact", "jaccard"}));
  eval_cmd->add_option("--jaccard-threshold", eval.jaccard_threshold, "Jaccard threshold")->check(CLI::Range(0.0, 1.0));

  std::string verb, form;
  auto* morph_cmd = app.add_subcommand("morph", "Conjugate a verb");
  morph_cmd->add_option("verb", verb)->required();
  morph_cmd->add_option("form", form, "base, past, participle, gerund or 3sg")->required();

  std::string stats_dataset;
  auto* stats_cmd = app.add_subcommand("stats", "Count headlines and sources in a dataset");
  stats_cmd->add_option("--dataset", stats_dataset)->required();

  CLI11_PARSE(app, argc, argv);

  if (*infer_cmd) return hlinfer::cli::cmd_infer(infer, std::cout, std::cerr);
  if (*eval_cmd) return hlinfer::cli::cmd_eval(eval, std::cout, std::cerr);
  if (*morph_cmd) return hlinfer::cli::cmd_morph(verb, form, std::cout, std::cerr);
  if (*stats_cmd) return hlinfer::cli::cmd_stats(stats_dataset, std::cout, std::cerr);
  return 2;
}
