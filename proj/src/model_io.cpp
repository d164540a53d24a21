#include "seer/model_io.hpp"

#include "seer/error.hpp"

namespace seer {

namespace {

int dim_field(const json& dims, const char* name) {
  if (!dims.contains(name) || !dims[name].is_number_integer()) {
    throw Error(ErrorCode::BadModelFile, std::string("dims.") + name + " missing");
  }
  const int v = dims[name].get<int>();
  if (v < 1) throw Error(ErrorCode::BadModelFile, std::string("dims.") + name + " must be positive");
  return v;
}

}  // namespace

json model_to_json(const ModelBundle& model) {
  model.validate();
  json j;
  j["version"] = kModelVersion;
  j["class_names"] = model.class_names;
  j["vocab"] = model.vocab.entries();
  j["unknown_id"] = model.vocab.unknown_id();
  j["dims"] = {{"V", model.vocab_size()},
               {"d_e", model.embed_dim()},
               {"d_h", model.hidden_dim()},
               {"K", model.num_classes()}};
  j["embedding"] = matrix_to_json(model.embedding);
  const GruWeights& g = model.gru;
  j["gru"] = {{"w_update", matrix_to_json(g.w_update)},
              {"w_reset", matrix_to_json(g.w_reset)},
              {"w_candidate", matrix_to_json(g.w_candidate)},
              {"u_update", matrix_to_json(g.u_update)},
              {"u_reset", matrix_to_json(g.u_reset)},
              {"u_candidate", matrix_to_json(g.u_candidate)},
              {"b_update", vector_to_json(g.b_update)},
              {"b_reset", vector_to_json(g.b_reset)},
              {"b_candidate", vector_to_json(g.b_candidate)}};
  j["head"] = matrix_to_json(model.head);
  j["head_bias"] = vector_to_json(model.head_bias);
  return j;
}

ModelBundle model_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("version")) {
      throw Error(ErrorCode::BadModelFile, "model file has no version");
    }
    if (j["version"] != kModelVersion) {
      throw Error(ErrorCode::VersionMismatch,
                  "unsupported model version " + j["version"].dump());
    }
    const json& dims = j.at("dims");
    const int v = dim_field(dims, "V");
    const int de = dim_field(dims, "d_e");
    const int dh = dim_field(dims, "d_h");
    const int k = dim_field(dims, "K");

    auto entries = j.at("vocab").get<std::vector<std::string>>();
    if (static_cast<int>(entries.size()) != v) {
      throw Error(ErrorCode::BadModelFile, "vocab length disagrees with dims.V");
    }
    ModelBundle m;
    m.vocab = Vocabulary(std::move(entries), j.at("unknown_id").get<int>());
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.embedding = matrix_from_json(j.at("embedding"), v, de, "embedding");
    const json& g = j.at("gru");
    m.gru.w_update = matrix_from_json(g.at("w_update"), de, dh, "gru.w_update");
    m.gru.w_reset = matrix_from_json(g.at("w_reset"), de, dh, "gru.w_reset");
    m.gru.w_candidate = matrix_from_json(g.at("w_candidate"), de, dh, "gru.w_candidate");
    m.gru.u_update = matrix_from_json(g.at("u_update"), dh, dh, "gru.u_update");
    m.gru.u_reset = matrix_from_json(g.at("u_reset"), dh, dh, "gru.u_reset");
    m.gru.u_candidate = matrix_from_json(g.at("u_candidate"), dh, dh, "gru.u_candidate");
    m.gru.b_update = vector_from_json(g.at("b_update"), dh, "gru.b_update");
    m.gru.b_reset = vector_from_json(g.at("b_reset"), dh, "gru.b_reset");
    m.gru.b_candidate = vector_from_json(g.at("b_candidate"), dh, "gru.b_candidate");
    m.head = matrix_from_json(j.at("head"), dh, k, "head");
    m.head_bias = vector_from_json(j.at("head_bias"), k, "head_bias");
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadModelFile, e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelBundle& model) {
  write_file(path, dump_json(model_to_json(model)));
}

ModelBundle load_model(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadModelFile, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace seer
