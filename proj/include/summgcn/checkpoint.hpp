#pragma once

#include <string>

#include "summgcn/rgcn.hpp"

namespace summgcn {

// Versioned binary container: magic header, relation/class/node
// vocabularies, then one named section per matrix (shape + row-major f64
// values). Everything a transfer needs to re-align rows and relations by
// label travels with the parameters.
void save_checkpoint(const RgcnParams& params, const std::string& path);

RgcnParams load_checkpoint(const std::string& path);

}  // namespace summgcn
