#include "dagsched/model.hpp"

#include <json.hpp>

#include "dagsched/textio.hpp"

namespace dagsched {

using nlohmann::json;

namespace {

void add_dense(Model& m, Rng& rng, const std::string& prefix, int in, int out) {
  m.params.add(prefix + ".W", uniform_init(in, out, in, rng));
  m.params.add(prefix + ".b", uniform_init(1, out, in, rng));
}

void add_policy(Model& m, Rng& rng, const std::string& prefix, int in) {
  const int h = m.cfg.policy_hidden;
  add_dense(m, rng, prefix + ".proj", in, h);
  for (int k = 0; k < m.cfg.policy_blocks; ++k) {
    add_dense(m, rng, prefix + ".res" + std::to_string(k) + ".f1", h, h);
    add_dense(m, rng, prefix + ".res" + std::to_string(k) + ".f2", h, h);
  }
  add_dense(m, rng, prefix + ".head", h, 1);
}

}  // namespace

Model make_model(const ModelConfig& cfg, std::uint64_t seed) {
  if (cfg.embed_dim < 1 || cfg.gnn_layers < 1 || cfg.hops < 0 ||
      cfg.policy_hidden < 1 || cfg.policy_blocks < 0)
    throw std::invalid_argument("invalid model config");
  Model m;
  m.cfg = cfg;
  Rng rng(mix_seed(seed, 0x6d6f64656cull));
  const int d = cfg.embed_dim;

  int in = kNodeFeatures;
  for (int l = 0; l < cfg.gnn_layers; ++l) {
    add_dense(m, rng, "gnn.in" + std::to_string(l), in, d);
    in = d;
  }
  for (int h = 0; h < cfg.hops; ++h)
    add_dense(m, rng, "gnn.hop" + std::to_string(h), 2 * d, d);

  add_policy(m, rng, "p1", 2 * d);
  add_policy(m, rng, "p2", 3 * d);
  return m;
}

std::string model_to_json(const Model& m) {
  json j;
  j["format_version"] = 1;
  j["config"] = {{"embed_dim", m.cfg.embed_dim},
                 {"gnn_layers", m.cfg.gnn_layers},
                 {"hops", m.cfg.hops},
                 {"policy_hidden", m.cfg.policy_hidden},
                 {"policy_blocks", m.cfg.policy_blocks}};
  json params = json::object();
  for (int i = 0; i < m.params.count(); ++i) {
    const Param& p = m.params.at(i);
    params[p.name] = {{"rows", p.value.rows()},
                      {"cols", p.value.cols()},
                      {"data", p.value.vec()}};
  }
  j["params"] = std::move(params);
  return j.dump() + "\n";
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("checkpoint parse error: ") + e.what());
  }
  if (j.at("format_version").get<int>() != 1)
    throw std::invalid_argument("unsupported checkpoint version");
  ModelConfig cfg;
  const json& jc = j.at("config");
  cfg.embed_dim = jc.at("embed_dim").get<int>();
  cfg.gnn_layers = jc.at("gnn_layers").get<int>();
  cfg.hops = jc.at("hops").get<int>();
  cfg.policy_hidden = jc.at("policy_hidden").get<int>();
  cfg.policy_blocks = jc.at("policy_blocks").get<int>();

  // Rebuild with the canonical layout, then overwrite every value; this
  // validates that the checkpoint covers exactly the expected parameter set.
  Model m = make_model(cfg, 0);
  const json& jp = j.at("params");
  if (jp.size() != std::size_t(m.params.count()))
    throw std::invalid_argument("checkpoint parameter set does not match config");
  for (int i = 0; i < m.params.count(); ++i) {
    Param& p = m.params.at(i);
    const json& e = jp.at(p.name);
    int rows = e.at("rows").get<int>();
    int cols = e.at("cols").get<int>();
    auto data = e.at("data").get<std::vector<double>>();
    if (rows != p.value.rows() || cols != p.value.cols())
      throw std::invalid_argument("checkpoint shape mismatch for " + p.name);
    p.value = Tensor2::from(rows, cols, std::move(data));
  }
  return m;
}

void save_model(const Model& m, const std::string& path) {
  write_text_file(path, model_to_json(m));
}

Model load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

}  // namespace dagsched
