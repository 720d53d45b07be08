#pragma once

#include <filesystem>

#include "stamp/tensor_io.hpp"

namespace stamp {

// Validates any interchange artefact, detected by content:
//   directory holding clip.json     clip mask set
//   FLW1 / TRK1 / EMB1 magic        tensor files (EMB1 with its default sidecar)
//   JSON object with "images"       COCO dataset
//   JSON object with size + counts  RLE mask
//   JSON array                      detector predictions
//   other JSON object               score table
//   *.ndjson                        training manifest
ValidationReport validate_any(const std::filesystem::path& path);

}  // namespace stamp
