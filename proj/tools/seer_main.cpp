// seer: train a GRU classifier, abstract it into a state machine, mine
// patterns and serve the analysis bundle.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seer/abstraction.hpp"
#include "seer/bundle.hpp"
#include "seer/error.hpp"
#include "seer/evaluation.hpp"
#include "seer/model_io.hpp"
#include "seer/service.hpp"
#include "seer/synthetic.hpp"
#include "seer/trainer.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

seer::AbstractionModel read_abstraction(const fs::path& path) {
  return seer::abstraction_from_json(seer::json::parse(seer::read_file(path)));
}

void print_trace(const seer::json& payload, const std::vector<std::string>& class_names) {
  const auto& tokens = payload["tokens"];
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const int label = payload["intermediate_labels"][t].get<int>();
    const double p = payload["intermediate"][t][static_cast<std::size_t>(label)].get<double>();
    std::printf("%-16s state=%-3d %s (%.3f)\n", tokens[t].get<std::string>().c_str(),
                payload["states"][t].get<int>(), class_names[static_cast<std::size_t>(label)].c_str(), p);
  }
  std::string trace;
  for (const auto& s : payload["states"]) trace += (trace.empty() ? "" : " -> ") + std::to_string(s.get<int>());
  std::printf("trace: %s\n", trace.c_str());
  std::printf("prediction: %s (fsm: %s)\n",
              class_names[payload["prediction"].get<std::size_t>()].c_str(),
              class_names[payload["abstract_prediction"].get<std::size_t>()].c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seer: state-machine explanations for GRU text classifiers"};
  app.require_subcommand(1);

  std::string data, model_path, bundle_dir, host = "127.0.0.1", out_path, json_out, ui_dir;
  std::string grid = "5,10,20,40,60,80";
  int pca_dim = seer::kDefaultPcaDim, states = seer::kDefaultStates, port = 8080;
  std::uint64_t seed = 7;
  seer::TrainConfig train_cfg;
  seer::MiningConfig mining;
  seer::SyntheticOptions synth;
  std::string text;

  const auto bundle_option = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--bundle", bundle_dir, "Analysis bundle directory")->envname("SEER_BUNDLE");
    if (required) opt->required();
  };

  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic sentiment corpus as JSONL");
  synth_cmd->add_option("--out", out_path, "Output dataset path")->required();
  synth_cmd->add_option("--train", synth.train, "Training sentences");
  synth_cmd->add_option("--test", synth.test, "Test sentences");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  auto* train_cmd = app.add_subcommand("train", "Train a GRU classifier");
  train_cmd->add_option("--data", data, "Dataset (JSONL)")->required();
  train_cmd->add_option("--model", model_path, "Output model file")->required();
  train_cmd->add_option("--seed", train_cfg.seed, "Training seed");
  train_cmd->add_option("--epochs", train_cfg.epochs, "Epochs");
  train_cmd->add_option("--lr", train_cfg.learning_rate, "Learning rate");
  train_cmd->add_option("--hidden", train_cfg.hidden_dim, "Hidden dimension");
  train_cmd->add_option("--embed", train_cfg.embed_dim, "Embedding dimension");
  std::vector<std::string> class_names;
  train_cmd->add_option("--classes", class_names, "Class names in label order");

  auto* abstract_cmd = app.add_subcommand("abstract", "Fit PCA + GMM over training hidden states");
  abstract_cmd->add_option("--model", model_path, "Model file")->required();
  abstract_cmd->add_option("--data", data, "Dataset (JSONL); the train split is used")->required();
  bundle_option(abstract_cmd, true);
  abstract_cmd->add_option("--pca-dim", pca_dim, "PCA dimension k (capped at d_h)");
  abstract_cmd->add_option("--states", states, "Number of abstract states n");
  abstract_cmd->add_option("--seed", seed, "Mixture seed");

  auto* analyze_cmd = app.add_subcommand("analyze", "Build the FSM, mine patterns and write the bundle");
  bundle_option(analyze_cmd, true);
  analyze_cmd->add_option("--data", data, "Dataset (JSONL)")->required();
  analyze_cmd->add_option("--top-k", mining.influential_top_k, "Influential patterns to keep");
  analyze_cmd->add_option("--buggy-k", mining.buggy_top_k, "Buggy patterns to keep");
  analyze_cmd->add_option("--window", mining.window, "States per influential window");
  analyze_cmd->add_option("--max-gap", mining.max_gap, "Gap allowed in buggy patterns");

  auto* eval_cmd = app.add_subcommand("eval", "Prediction consistency between the FSM and the model");
  bundle_option(eval_cmd, true);
  eval_cmd->add_option("--data", data, "Dataset (JSONL); defaults to the bundle's instances");

  auto* sweep_cmd = app.add_subcommand("sweep", "Consistency as a function of the number of states");
  bundle_option(sweep_cmd, false);
  sweep_cmd->add_option("--model", model_path, "Model file (defaults to <bundle>/model.json)");
  sweep_cmd->add_option("--data", data, "Dataset (JSONL)")->required();
  sweep_cmd->add_option("--grid", grid, "Comma-separated ascending state counts");
  sweep_cmd->add_option("--pca-dim", pca_dim, "PCA dimension k");
  sweep_cmd->add_option("--seed", seed, "Mixture seed");
  sweep_cmd->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  sweep_cmd->add_option("--json", json_out, "Optional JSON report path");

  auto* predict_cmd = app.add_subcommand("predict", "Trace one sentence through the model and FSM");
  bundle_option(predict_cmd, true);
  predict_cmd->add_option("text", text, "Input text")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Serve the bundle over HTTP");
  bundle_option(serve_cmd, true);
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--host", host, "Host");
  serve_cmd->add_option("--ui-dir", ui_dir, "Static UI assets served under /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*synth_cmd) {
      seer::write_dataset(out_path, seer::make_sentiment_corpus(synth));
    } else if (*train_cmd) {
      const auto rows = seer::read_dataset(fs::path(data));
      const seer::TrainReport report = seer::train(train_cfg, rows, class_names);
      seer::save_model(model_path, report.model);
      std::printf("train_accuracy=%.4f test_accuracy=%.4f final_loss=%.6f\n", report.train_accuracy,
                  report.test_accuracy, report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back());
    } else if (*abstract_cmd) {
      const seer::ModelBundle model = seer::load_model(model_path);
      const auto train_rows = seer::select_split(seer::read_dataset(fs::path(data)), seer::Split::Train);
      if (pca_dim > model.hidden_dim()) pca_dim = model.hidden_dim();
      const auto abstraction =
          seer::fit_abstraction(model, seer::texts_of(train_rows), pca_dim, states, seed);
      fs::create_directories(bundle_dir);
      seer::save_model(fs::path(bundle_dir) / "model.json", model);
      seer::write_file(fs::path(bundle_dir) / "abstraction.json",
                       seer::dump_json(seer::abstraction_to_json(abstraction)));
      std::printf("abstraction: k=%d n=%d seed=%llu\n", abstraction.pca_dim(), abstraction.n_states(),
                  static_cast<unsigned long long>(seed));
    } else if (*analyze_cmd) {
      const fs::path dir(bundle_dir);
      seer::ModelBundle model = seer::load_model(dir / "model.json");
      seer::AbstractionModel abstraction = read_abstraction(dir / "abstraction.json");
      const auto rows = seer::read_dataset(fs::path(data));
      const auto bundle = seer::build_analysis(std::move(model), std::move(abstraction), rows, mining);
      seer::save_bundle(dir, bundle);
      std::printf("analyzed %zu instances: %zu influential, %zu buggy patterns\n", bundle.instances.size(),
                  bundle.patterns.influential.size(), bundle.patterns.buggy.size());
    } else if (*eval_cmd) {
      const seer::AnalysisBundle bundle = seer::load_bundle(bundle_dir);
      std::vector<std::string> train_texts, test_texts;
      if (!data.empty()) {
        const auto rows = seer::read_dataset(fs::path(data));
        train_texts = seer::texts_of(seer::select_split(rows, seer::Split::Train));
        test_texts = seer::texts_of(seer::select_split(rows, seer::Split::Test));
      } else {
        for (const auto& r : bundle.instances.records()) {
          (r.split == seer::Split::Train ? train_texts : test_texts).push_back(r.text);
        }
      }
      std::vector<seer::ConsistencyReport> reports;
      for (auto* texts : {&train_texts, &test_texts}) {
        if (texts->empty()) continue;
        reports.push_back(seer::prediction_consistency(bundle.model, bundle.abstraction, bundle.fsm, *texts,
                                                       texts == &train_texts ? "train" : "test"));
      }
      std::fputs(seer::reports_to_csv(reports).c_str(), stdout);
    } else if (*sweep_cmd) {
      if (model_path.empty()) {
        if (bundle_dir.empty()) throw seer::Error(seer::ErrorCode::Io, "sweep needs --model or --bundle");
        model_path = (fs::path(bundle_dir) / "model.json").string();
      }
      const seer::ModelBundle model = seer::load_model(model_path);
      const auto rows = seer::read_dataset(fs::path(data));
      const auto train_texts = seer::texts_of(seer::select_split(rows, seer::Split::Train));
      const auto test_texts = seer::texts_of(seer::select_split(rows, seer::Split::Test));
      const std::vector<int> n_list = parse_grid(grid);
      seer::SweepOptions options;
      options.include_train = true;
      if (pca_dim > model.hidden_dim()) pca_dim = model.hidden_dim();
      const auto reports = seer::sweep_states(model, train_texts, test_texts, n_list, pca_dim, seed, options);
      const std::string csv = seer::reports_to_csv(reports);
      if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        seer::write_file(out_path, csv);
      }
      if (!json_out.empty()) seer::write_file(json_out, seer::dump_json(seer::reports_to_json(reports)));
    } else if (*predict_cmd) {
      const seer::AnalysisBundle bundle = seer::load_bundle(bundle_dir);
      print_trace(seer::predict_payload(bundle, text), bundle.model.class_names);
    } else if (*serve_cmd) {
      const seer::AnalysisService service(seer::load_bundle(bundle_dir));
      seer::HttpServer server(service, ui_dir);
      if (!server.bind(host, port)) throw seer::Error(seer::ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
      std::printf("serving %s on http://%s:%d\n", bundle_dir.c_str(), host.c_str(), port);
      std::fflush(stdout);
      server.listen_after_bind();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
