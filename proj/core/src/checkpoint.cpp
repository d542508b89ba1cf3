#include "hyperncs/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hyperncs::checkpoint {

using nlohmann::ordered_json;

namespace {

ordered_json net_to_node(const net::DenseNet& n) {
  ordered_json j;
  j["layer_dims"] = n.layer_dims;
  std::vector<std::string> acts;
  for (auto a : n.activations) acts.emplace_back(net::activation_name(a));
  j["activations"] = acts;
  ordered_json weights = ordered_json::array();
  ordered_json biases = ordered_json::array();
  for (int l = 0; l < n.num_layers(); ++l) {
    std::vector<double> w;
    w.reserve(n.weights[l].size());
    for (int r = 0; r < n.weights[l].rows(); ++r) {
      for (int c = 0; c < n.weights[l].cols(); ++c) {
        w.push_back(n.weights[l](r, c));
      }
    }
    weights.push_back(w);
    biases.push_back(std::vector<double>(n.biases[l].data(),
                                         n.biases[l].data() + n.biases[l].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

net::DenseNet net_from_node(const ordered_json& j) {
  net::DenseNet n;
  n.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  if (n.layer_dims.size() < 2) {
    throw std::invalid_argument("checkpoint: fewer than two layer dims");
  }
  for (const auto& name : j.at("activations")) {
    n.activations.push_back(net::activation_from_name(name.get<std::string>()));
  }
  const size_t layers = n.layer_dims.size() - 1;
  if (n.activations.size() != layers ||
      j.at("weights").size() != layers || j.at("biases").size() != layers) {
    throw std::invalid_argument("checkpoint: layer count mismatch");
  }
  for (size_t l = 0; l < layers; ++l) {
    const int rows = n.layer_dims[l + 1];
    const int cols = n.layer_dims[l];
    const auto w = j.at("weights")[l].get<std::vector<double>>();
    const auto b = j.at("biases")[l].get<std::vector<double>>();
    if (static_cast<int>(w.size()) != rows * cols ||
        static_cast<int>(b.size()) != rows) {
      throw std::invalid_argument("checkpoint: parameter shape mismatch at layer " +
                                  std::to_string(l));
    }
    Eigen::MatrixXd wm(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) wm(r, c) = w[r * cols + c];
    }
    n.weights.push_back(std::move(wm));
    n.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
  }
  return n;
}

ordered_json parse(const std::string& text, const char* expected_format) {
  ordered_json j = ordered_json::parse(text);
  if (j.value("format", "") != expected_format) {
    throw std::invalid_argument(std::string("checkpoint: expected format '") +
                                expected_format + "'");
  }
  return j;
}

}  // namespace

std::string dense_net_to_json(const net::DenseNet& net) {
  ordered_json j;
  j["format"] = "densenet-v1";
  j.update(net_to_node(net));
  return j.dump();
}

net::DenseNet dense_net_from_json(const std::string& text) {
  return net_from_node(parse(text, "densenet-v1"));
}

std::string autoencoder_to_json(const embed::Autoencoder& ae) {
  ordered_json j;
  j["format"] = "autoencoder-v1";
  j["input_dim"] = ae.input_dim;
  j["latent_dim"] = ae.latent_dim;
  if (ae.norm.fitted()) {
    j["normalization"]["shift"] = std::vector<double>(
        ae.norm.shift.data(), ae.norm.shift.data() + ae.norm.shift.size());
    j["normalization"]["scale"] = std::vector<double>(
        ae.norm.scale.data(), ae.norm.scale.data() + ae.norm.scale.size());
  }
  j["encoder"] = net_to_node(ae.encoder);
  j["decoder"] = net_to_node(ae.decoder);
  return j.dump();
}

embed::Autoencoder autoencoder_from_json(const std::string& text) {
  const ordered_json j = parse(text, "autoencoder-v1");
  embed::Autoencoder ae;
  ae.input_dim = j.at("input_dim").get<int>();
  ae.latent_dim = j.at("latent_dim").get<int>();
  ae.encoder = net_from_node(j.at("encoder"));
  ae.decoder = net_from_node(j.at("decoder"));
  if (ae.encoder.input_dim() != ae.input_dim ||
      ae.encoder.output_dim() != ae.latent_dim ||
      ae.decoder.input_dim() != ae.latent_dim ||
      ae.decoder.output_dim() != ae.input_dim) {
    throw std::invalid_argument("checkpoint: autoencoder dimension mismatch");
  }
  if (j.contains("normalization")) {
    const auto shift = j["normalization"].at("shift").get<std::vector<double>>();
    const auto scale = j["normalization"].at("scale").get<std::vector<double>>();
    if (static_cast<int>(shift.size()) != ae.input_dim ||
        static_cast<int>(scale.size()) != ae.input_dim) {
      throw std::invalid_argument("checkpoint: normalization dimension mismatch");
    }
    ae.norm.shift = Eigen::Map<const Eigen::VectorXd>(shift.data(), shift.size());
    ae.norm.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), scale.size());
  }
  return ae;
}

std::string hnn_to_json(const surrogate::HnnModel& model) {
  ordered_json j;
  j["format"] = "hnn-v1";
  j["curvature"] = model.curvature;
  j["core"] = net_to_node(model.core);
  return j.dump();
}

surrogate::HnnModel hnn_from_json(const std::string& text) {
  const ordered_json j = parse(text, "hnn-v1");
  surrogate::HnnModel model;
  model.curvature = j.at("curvature").get<double>();
  model.core = net_from_node(j.at("core"));
  if (model.core.output_dim() != 2) {
    throw std::invalid_argument("checkpoint: hnn core must have 2 outputs");
  }
  return model;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hyperncs::checkpoint
