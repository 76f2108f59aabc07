#pragma once

#include <string>
#include <vector>

#include "nidsgnn/nn/param.hpp"

namespace nidsgnn::encoder {

// Versioned named-matrix container. Fixed little-endian layout:
//   magic "NGCK" | u32 version | u64 config digest | u32 param count
//   per param: u32 name length | name bytes | u64 rows | u64 cols | doubles
// Matrices are written in store order, so identical state serializes to
// identical bytes.
void save_checkpoint(const std::string& path, const nn::ParamStore& params,
                     std::uint64_t config_digest);

// Loads into an existing store: shapes and names must match exactly, and the
// stored digest must equal config_digest.
void load_checkpoint(const std::string& path, nn::ParamStore& params,
                     std::uint64_t config_digest);

std::vector<unsigned char> checkpoint_bytes(const nn::ParamStore& params,
                                            std::uint64_t config_digest);

// In-memory counterpart of load_checkpoint with the same validation.
void load_checkpoint_bytes(const std::vector<unsigned char>& bytes,
                           nn::ParamStore& params, std::uint64_t config_digest);

}  // namespace nidsgnn::encoder
