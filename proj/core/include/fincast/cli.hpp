#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fincast/arima.hpp"

namespace fincast::cli {

// Stable exit codes, shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;        // parse/fetch/io failures
inline constexpr int kExitSingularFit = 3;      // degenerate regression
inline constexpr int kExitInsufficientData = 4; // too little data for the ask
inline constexpr int kExitModelFormat = 5;      // model file version/checksum
inline constexpr int kExitBackend = 6;          // chat backend failures

struct InflationArgs {
    std::string country = "IN";
    std::string indicator;  // defaults to the headline CPI indicator
    arima::ArimaOrder order{15, 1, 0};
    int horizon = 10;
    std::string from_json;  // offline fixture path; empty = live fetch
    bool live = false;      // explicit opt-in for the network path
    std::string out_dir = "out";
    std::string tag;  // output folder name; empty = UTC timestamp
};

struct StockTrainArgs {
    std::string csv;
    int lookback = 60;
    double split = 0.8;
    int epochs = 10;
    int batch = 32;
    double learning_rate = 0.001;
    double dropout = 0.2;
    std::uint64_t seed = 42;
    bool fit_scaler_on_train = false;  // leakage-free variant
    std::string model_out;             // empty = <run dir>/model.fincast
    std::string out_dir = "out";
    std::string tag;
};

struct StockPredictArgs {
    std::string model;
    std::string csv;
    int days = 5;
    std::string out_dir = "out";
    std::string tag;
};

struct ChatArgs {
    std::string question;
    std::string person;
    std::string url;       // optional page for the scrape tool
    std::string endpoint;  // OpenAI-compatible chat-completions URL
    std::string model = "llama3-8b-8192";
    std::string api_key;   // falls back to $FINCAST_API_KEY
    std::string stub;      // scripted-replies JSON file; overrides endpoint
    double temperature = 0.0;
    std::string out_dir = "out";
    std::string tag;
};

// Each command throws fincast errors; run() maps them to exit codes and a
// one-line diagnostic on stderr. They are also callable directly (tests do).
void cmd_inflation(const InflationArgs& args, std::ostream& out);
void cmd_stock_train(const StockTrainArgs& args, std::ostream& out);
void cmd_stock_predict(const StockPredictArgs& args, std::ostream& out);
void cmd_chat(const ChatArgs& args, std::ostream& out);

/// Full argv entry point used by the fincast binary.
int run(int argc, const char* const* argv);

/// Exit code for an already-caught error (the mapping run() applies).
int exit_code_for_current_exception();

}  // namespace fincast::cli
