#pragma once

#include <string>

#include "hyperncs/autoencoder.hpp"
#include "hyperncs/dense_net.hpp"
#include "hyperncs/surrogate.hpp"

namespace hyperncs::checkpoint {

/// Versioned JSON documents: layer dims, activation tags and row-major
/// parameter arrays. Loading validates the format tag and rejects any
/// dimension mismatch.

std::string dense_net_to_json(const net::DenseNet& net);
net::DenseNet dense_net_from_json(const std::string& text);

std::string autoencoder_to_json(const embed::Autoencoder& ae);
embed::Autoencoder autoencoder_from_json(const std::string& text);

std::string hnn_to_json(const surrogate::HnnModel& model);
surrogate::HnnModel hnn_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hyperncs::checkpoint
