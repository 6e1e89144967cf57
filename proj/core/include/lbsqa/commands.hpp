#pragma once

#include "lbsqa/config.hpp"

namespace lbsqa::cli {

/// Pipeline stage entry points shared by the command-line tool and the test
/// suites. Each returns a process exit code (ExitCode) and reports progress
/// on stdout / problems on stderr.

int cmd_synth(const PipelineConfig& cfg);
int cmd_quality(const PipelineConfig& cfg);
int cmd_qualify(const PipelineConfig& cfg);
int cmd_segment(const PipelineConfig& cfg);
int cmd_bias(const PipelineConfig& cfg);
int cmd_regress(const PipelineConfig& cfg);
int cmd_pipeline(const PipelineConfig& cfg);

}  // namespace lbsqa::cli
