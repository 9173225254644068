#pragma once
// Study configuration: one INI-style file with a section per concern, parsed
// strictly (unknown sections/keys and malformed values are config errors) and
// layered over built-in defaults. Command-line flags override file values.

#include <iosfwd>
#include <string>

#include "mazing/pipeline.hpp"
#include "mazing/sim.hpp"
#include "mazing/svm.hpp"
#include "mazing/traces.hpp"

namespace mazing::config {

struct StudySettings {
    sim::StudyConfig study;            // participants, sessions per, base seed, session template
    traces::AnnotatorModel annotator;  // cue weights, lag, smoothing, drift
    double noise_rel = 0.1;            // annotation noise as a fraction of the cue signal SD
    std::string channels = "noise23";  // "noise23" synthesizes the canonical set; "none" skips
    double channel_gap_rate = 0.0;     // expected sensor dropouts per second
    pipeline::PipelineConfig pipe;
    svm::SvmHyperparams hp;
    long pair_cap = 0;  // canonical training comparisons kept per session; 0 = all
    int threads = 0;    // 0 = parallel folds, 1 = sequential
};

// Built-in defaults: 20 participants x 4 sessions, 60 s at 30 Hz, an
// annotator following Score (weight 1) and Chasing Player (weight 0.5) with
// 1 s lag, 0.5 s smoothing, and 10% relative noise, the canonical noise
// channels, w=3 l=1 windows, and a linear C=1 ranker.
StudySettings defaults();

StudySettings parse(std::istream& is);        // throws ConfigError on any problem
StudySettings load(const std::string& path);  // ConfigError when unreadable

}  // namespace mazing::config
