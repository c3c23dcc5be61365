#include "fincast/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fincast/agents.hpp"
#include "fincast/crc32.hpp"
#include "fincast/errors.hpp"
#include "fincast/ingest.hpp"
#include "fincast/lstm.hpp"
#include "fincast/metrics.hpp"
#include "fincast/plot.hpp"
#include "fincast/preprocess.hpp"

namespace fincast::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing file: " + path.string());
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return buf;
}

fs::path make_run_dir(const std::string& out_dir, const std::string& subcommand,
                      const std::string& tag) {
    fs::path dir = fs::path(out_dir) / subcommand / (tag.empty() ? utc_timestamp() : tag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string metrics_json(const metrics::MetricsReport& m) {
    json doc;
    doc["mae"] = m.mae;
    doc["mse"] = m.mse;
    doc["rmse"] = m.rmse;
    doc["r2"] = m.r2;
    doc["n"] = m.n;
    return doc.dump(2) + "\n";
}

std::string series_csv(const DatedSeries& series) {
    std::ostringstream out;
    out << "index,date,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", series.value(i));
        out << i << "," << series.date(i).to_string() << "," << buf << "\n";
    }
    return out.str();
}

std::string forecast_csv(const std::vector<Date>& dates, const std::vector<double>& values) {
    std::ostringstream out;
    out << "index,date,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out << i << "," << dates[i].to_string() << "," << buf << "\n";
    }
    return out.str();
}

struct ManifestInfo {
    std::string subcommand;
    json config = json::object();
    json seeds = json::object();
    json inputs = json::object();  // path -> crc32 of the bytes
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    json extra = json::object();
};

/// Every successful run leaves a manifest next to its outputs.
void write_manifest(const fs::path& dir, const ManifestInfo& info, double wall_seconds) {
    json doc;
    doc["subcommand"] = info.subcommand;
    doc["config"] = info.config;
    doc["seeds"] = info.seeds;
    doc["inputs"] = info.inputs;
    doc["outputs"] = info.outputs;
    doc["warnings"] = info.warnings;
    doc["wall_clock_seconds"] = wall_seconds;
    for (auto& [key, value] : info.extra.items()) doc[key] = value;
    write_file(dir / "manifest.json", doc.dump(2) + "\n");
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void cmd_inflation(const InflationArgs& args, std::ostream& out) {
    const auto t0 = Clock::now();
    const std::string indicator =
        args.indicator.empty() ? ingest::kDefaultIndicator : args.indicator;

    ManifestInfo manifest;
    manifest.subcommand = "inflation";

    std::string body;
    if (!args.from_json.empty()) {
        body = read_file(args.from_json);
        manifest.inputs[args.from_json] = crc32_hex(body);
    } else if (args.live) {
        body = ingest::fetch_worldbank_series(args.country, indicator);
    } else {
        throw NoData("no data source: pass --from-json FILE, or --live to query the World Bank API");
    }

    const DatedSeries series = ingest::resample_annual(ingest::parse_worldbank_json(body));
    const arima::ArModel model = arima::fit(series, args.order, &manifest.warnings);
    const arima::ForecastResult fc = arima::forecast(model, series, args.horizon);
    const arima::InSamplePredictions insample = arima::one_step_insample(model, series);
    const metrics::MetricsReport m = metrics::evaluate(insample.actual, insample.predicted);

    const fs::path dir = make_run_dir(args.out_dir, "inflation", args.tag);
    write_file(dir / "history.csv", series_csv(series));
    write_file(dir / "forecast.csv", forecast_csv(fc.horizon_dates, fc.values));
    write_file(dir / "inflation.svg", plot::history_forecast_plot(series, fc));
    write_file(dir / "metrics.json", metrics_json(m));

    manifest.config = {{"country", args.country},
                       {"indicator", indicator},
                       {"order", {args.order.p, args.order.d, args.order.q}},
                       {"horizon", args.horizon},
                       {"from_json", args.from_json},
                       {"live", args.live},
                       {"out_dir", args.out_dir},
                       {"tag", args.tag}};
    manifest.outputs = {(dir / "history.csv").generic_string(),
                        (dir / "forecast.csv").generic_string(),
                        (dir / "inflation.svg").generic_string(),
                        (dir / "metrics.json").generic_string()};
    manifest.extra["model"] = {{"intercept", model.intercept},
                               {"coefficients", model.coefficients},
                               {"residual_variance", model.in_sample_residual_variance}};
    write_manifest(dir, manifest, seconds_since(t0));

    out << "fit ARIMA(" << args.order.p << "," << args.order.d << ",0) on " << series.size()
        << " annual points; in-sample one-step MAE " << m.mae << ", RMSE " << m.rmse << "\n";
    out << "forecast horizon " << args.horizon << " -> " << (dir / "forecast.csv").generic_string()
        << "\n";
    out << "outputs in " << dir.generic_string() << "\n";
}

void cmd_stock_train(const StockTrainArgs& args, std::ostream& out) {
    const auto t0 = Clock::now();

    ManifestInfo manifest;
    manifest.subcommand = "stock-train";

    const std::string text = read_file(args.csv);
    manifest.inputs[args.csv] = crc32_hex(text);
    const OhlcvSeries bars = ingest::parse_yahoo_csv(text);
    const DatedSeries closes = ingest::close_series(bars);
    const std::vector<double>& values = closes.values();

    if (static_cast<int>(values.size()) <= args.lookback)
        throw InsufficientData("csv has " + std::to_string(values.size()) +
                               " closes; need more than lookback " + std::to_string(args.lookback));

    // Scaler scope: whole close series by default; the leakage-free variant
    // fits only on prices the training windows can see.
    preprocess::ScalerParams scaler;
    if (args.fit_scaler_on_train) {
        const std::size_t n_windows = values.size() - static_cast<std::size_t>(args.lookback);
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(args.split * static_cast<double>(n_windows)));
        const std::size_t prefix = n_train + static_cast<std::size_t>(args.lookback);
        scaler = preprocess::fit_scaler(std::span(values).first(prefix));
    } else {
        scaler = preprocess::fit_scaler(values);
    }

    const std::vector<double> scaled = preprocess::transform(scaler, values);
    const preprocess::WindowedDataset windows = preprocess::make_windows(scaled, args.lookback);
    const preprocess::SplitDataset split = preprocess::chrono_split(windows, args.split);

    lstm::LstmNetwork net = lstm::init_network(args.seed, 1, 50, args.dropout, args.lookback);
    lstm::TrainConfig config;
    config.epochs = args.epochs;
    config.batch_size = args.batch;
    config.learning_rate = args.learning_rate;
    config.shuffle_seed = args.seed + 1;
    const lstm::TrainReport report = lstm::train(net, split, config);

    const metrics::MetricsReport m = lstm::evaluate(net, split, scaler);

    const fs::path dir = make_run_dir(args.out_dir, "stock-train", args.tag);
    const fs::path model_path =
        args.model_out.empty() ? dir / "model.fincast" : fs::path(args.model_out);
    lstm::save_model(net, scaler, model_path.string());

    const auto preds = lstm::predict_series(net, split.test.inputs);
    const auto pred_prices = preprocess::inverse_transform(scaler, preds);
    const auto actual_prices = preprocess::inverse_transform(scaler, split.test.targets);
    write_file(dir / "actual_vs_predicted.svg",
               plot::actual_vs_predicted_plot(actual_prices, pred_prices));
    write_file(dir / "metrics.json", metrics_json(m));

    manifest.config = {{"csv", args.csv},
                       {"lookback", args.lookback},
                       {"split", args.split},
                       {"epochs", args.epochs},
                       {"batch", args.batch},
                       {"learning_rate", args.learning_rate},
                       {"dropout", args.dropout},
                       {"fit_scaler_on_train", args.fit_scaler_on_train},
                       {"model_out", model_path.generic_string()},
                       {"out_dir", args.out_dir},
                       {"tag", args.tag}};
    manifest.seeds = {{"init", args.seed}, {"shuffle", args.seed + 1}};
    manifest.outputs = {model_path.generic_string(),
                        (dir / "actual_vs_predicted.svg").generic_string(),
                        (dir / "metrics.json").generic_string()};
    manifest.extra["train"] = {{"epoch_losses", report.epoch_losses},
                               {"wall_seconds", report.wall_seconds},
                               {"param_checksum", to_hex8(report.param_checksum)},
                               {"train_windows", split.train.size()},
                               {"test_windows", split.test.size()}};
    write_manifest(dir, manifest, seconds_since(t0));

    out << "trained " << net.param_count() << "-parameter network on " << split.train.size()
        << " windows (" << args.epochs << " epochs)\n";
    out << "test metrics: MAE " << m.mae << "  MSE " << m.mse << "  RMSE " << m.rmse << "  R2 "
        << m.r2 << "\n";
    out << "model -> " << model_path.generic_string() << "\n";
    out << "outputs in " << dir.generic_string() << "\n";
}

void cmd_stock_predict(const StockPredictArgs& args, std::ostream& out) {
    const auto t0 = Clock::now();
    if (args.days < 0) throw InsufficientData("days must be non-negative");

    ManifestInfo manifest;
    manifest.subcommand = "stock-predict";

    const lstm::LoadedModel loaded = lstm::load_model(args.model);
    manifest.inputs[args.model] = crc32_hex(read_file(args.model));

    const std::string text = read_file(args.csv);
    manifest.inputs[args.csv] = crc32_hex(text);
    const DatedSeries closes = ingest::close_series(ingest::parse_yahoo_csv(text));
    const std::vector<double>& values = closes.values();

    const int lookback = loaded.net.lookback;
    if (static_cast<int>(values.size()) < lookback)
        throw InsufficientData("csv has " + std::to_string(values.size()) +
                               " closes; model needs " + std::to_string(lookback));

    std::vector<double> window(values.end() - lookback, values.end());
    for (double& v : window) v = preprocess::transform(loaded.scaler, v);

    const std::vector<double> prices =
        lstm::future_forecast(loaded.net, loaded.scaler, window, args.days);

    std::vector<Date> dates;
    dates.reserve(prices.size());
    for (int k = 1; k <= args.days; ++k) dates.push_back(closes.last_date().plus_days(k));

    for (std::size_t i = 0; i < prices.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.2f", prices[i]);
        out << "Day " << (i + 1) << ": $" << buf << "\n";
    }

    const fs::path dir = make_run_dir(args.out_dir, "stock-predict", args.tag);
    write_file(dir / "forecast.csv", forecast_csv(dates, prices));

    manifest.config = {{"model", args.model},
                       {"csv", args.csv},
                       {"days", args.days},
                       {"out_dir", args.out_dir},
                       {"tag", args.tag}};
    manifest.outputs = {(dir / "forecast.csv").generic_string()};
    write_manifest(dir, manifest, seconds_since(t0));
}

void cmd_chat(const ChatArgs& args, std::ostream& out) {
    const auto t0 = Clock::now();

    ManifestInfo manifest;
    manifest.subcommand = "chat";

    std::unique_ptr<agents::ChatBackend> backend;
    if (!args.stub.empty()) {
        const std::string text = read_file(args.stub);
        manifest.inputs[args.stub] = crc32_hex(text);
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError("stub file is not valid JSON: " + std::string(e.what()));
        }
        if (!doc.contains("replies") || !doc["replies"].is_array())
            throw ParseError("stub file must contain a 'replies' array");
        std::vector<std::string> replies;
        for (const auto& r : doc["replies"]) replies.push_back(r.get<std::string>());
        backend = std::make_unique<agents::ScriptedBackend>(std::move(replies));
    } else if (!args.endpoint.empty()) {
        std::string key = args.api_key;
        if (key.empty())
            if (const char* env = std::getenv("FINCAST_API_KEY")) key = env;
        backend = std::make_unique<agents::HttpChatBackend>(args.endpoint, args.model, key,
                                                            args.temperature);
    } else {
        throw BackendError(
            "no backend configured: pass --stub FILE for an offline run, or --endpoint URL "
            "(API key via --api-key or $FINCAST_API_KEY)");
    }

    const std::vector<agents::AgentSpec> crew_agents = {agents::default_support_agent(),
                                                        agents::default_qa_agent()};
    const std::vector<agents::TaskSpec> tasks = agents::default_support_tasks();
    const std::map<std::string, std::string> inputs = {{"question", args.question},
                                                       {"person", args.person}};
    std::map<std::string, agents::Tool> tools;
    if (!args.url.empty()) tools.emplace("scrape_website", agents::make_scrape_tool(args.url));

    const agents::CrewRunLog log = agents::run_crew(crew_agents, tasks, *backend, tools, inputs);

    for (const auto& entry : log.entries) {
        out << "== " << entry.task_id << " / " << entry.agent_role << " ==\n";
        for (const auto& inv : entry.tool_invocations) {
            if (inv.ok)
                out << "[tool " << inv.tool << " " << inv.detail << " -> " << inv.bytes
                    << " chars]\n";
            else
                out << "[tool " << inv.tool << " " << inv.detail << " failed: " << inv.note
                    << "]\n";
        }
        out << entry.reply << "\n\n";
    }
    out << "Final answer:\n" << log.final_answer << "\n";

    const fs::path dir = make_run_dir(args.out_dir, "chat", args.tag);
    write_file(dir / "transcript.jsonl", agents::to_jsonl(log));

    manifest.config = {{"question", args.question}, {"person", args.person},
                       {"url", args.url},           {"endpoint", args.endpoint},
                       {"model", args.model},       {"stub", args.stub},
                       {"temperature", args.temperature}, {"out_dir", args.out_dir},
                       {"tag", args.tag}};
    manifest.outputs = {(dir / "transcript.jsonl").generic_string()};
    write_manifest(dir, manifest, seconds_since(t0));
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const SingularDesign&) {
        return kExitSingularFit;
    } catch (const FormatVersionError&) {
        return kExitModelFormat;
    } catch (const ChecksumError&) {
        return kExitModelFormat;
    } catch (const InsufficientData&) {
        return kExitInsufficientData;
    } catch (const DegenerateRange&) {
        return kExitInsufficientData;
    } catch (const ShapeError&) {
        return kExitInsufficientData;
    } catch (const BackendError&) {
        return kExitBackend;
    } catch (const MalformedResponse&) {
        return kExitBackend;
    } catch (const NoTasks&) {
        return kExitBackend;
    } catch (const MissingPlaceholder&) {
        return kExitBackend;
    } catch (const Error&) {
        return kExitDataError;
    } catch (...) {
        return 1;
    }
}

namespace {

arima::ArimaOrder parse_order(const std::string& text) {
    int p = 0, d = 0, q = 0;
    char extra = '\0';
    const int got = std::sscanf(text.c_str(), "%d,%d,%d%c", &p, &d, &q, &extra);
    if (got != 3) throw ParseError("--order expects p,d,q (e.g. 15,1,0), got '" + text + "'");
    return arima::ArimaOrder{p, d, q};
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"financial forecasting toolkit: ARIMA inflation forecasts, from-scratch LSTM "
                 "stock prediction, and a two-agent support chat pipeline"};
    app.require_subcommand(1);

    InflationArgs infl;
    std::string order_text = "15,1,0";
    auto* inflation = app.add_subcommand("inflation", "Fit an AR model to an annual inflation "
                                                      "series and write a multi-year forecast");
    inflation->add_option("--country", infl.country, "ISO country code")->capture_default_str();
    inflation->add_option("--indicator", infl.indicator,
                          "World Bank indicator (default: headline CPI, annual %)");
    inflation->add_option("--order", order_text, "ARIMA order p,d,q; q must be 0")
        ->capture_default_str();
    inflation->add_option("--horizon", infl.horizon, "forecast years")->capture_default_str();
    inflation->add_option("--from-json", infl.from_json, "recorded World Bank JSON response");
    inflation->add_flag("--live", infl.live, "fetch from the World Bank API");
    inflation->add_option("--out-dir", infl.out_dir, "output base directory")
        ->capture_default_str();
    inflation->add_option("--tag", infl.tag, "run folder name (default: UTC timestamp)");

    auto* stock = app.add_subcommand("stock", "LSTM stock-price workflows");
    stock->require_subcommand(1);

    StockTrainArgs train_args;
    auto* train = stock->add_subcommand("train", "Train the two-layer LSTM on a close-price CSV");
    train->add_option("--csv", train_args.csv, "OHLCV CSV file")->required();
    train->add_option("--lookback", train_args.lookback, "window length")->capture_default_str();
    train->add_option("--split", train_args.split, "train fraction")->capture_default_str();
    train->add_option("--epochs", train_args.epochs, "training epochs")->capture_default_str();
    train->add_option("--batch", train_args.batch, "batch size")->capture_default_str();
    train->add_option("--lr", train_args.learning_rate, "Adam learning rate")
        ->capture_default_str();
    train->add_option("--dropout", train_args.dropout, "dropout rate")->capture_default_str();
    train->add_option("--seed", train_args.seed, "weight/shuffle seed")->capture_default_str();
    train->add_flag("--fit-scaler-on-train", train_args.fit_scaler_on_train,
                    "fit the scaler on the training prefix only (leakage-free)");
    train->add_option("--model-out", train_args.model_out, "model file path");
    train->add_option("--out-dir", train_args.out_dir, "output base directory")
        ->capture_default_str();
    train->add_option("--tag", train_args.tag, "run folder name");

    StockPredictArgs predict_args;
    auto* predict = stock->add_subcommand("predict", "Iterative multi-day forecast from a saved "
                                                     "model");
    predict->add_option("--model", predict_args.model, "model file")->required();
    predict->add_option("--csv", predict_args.csv, "OHLCV CSV file")->required();
    predict->add_option("--days", predict_args.days, "days to forecast")->capture_default_str();
    predict->add_option("--out-dir", predict_args.out_dir, "output base directory")
        ->capture_default_str();
    predict->add_option("--tag", predict_args.tag, "run folder name");

    ChatArgs chat_args;
    auto* chat = app.add_subcommand("chat", "Two-agent support pipeline (draft, then QA review)");
    chat->add_option("--question", chat_args.question, "user question")->required();
    chat->add_option("--person", chat_args.person, "who is asking")->required();
    chat->add_option("--url", chat_args.url, "page for the scrape tool");
    chat->add_option("--endpoint", chat_args.endpoint,
                     "OpenAI-compatible chat-completions URL");
    chat->add_option("--model", chat_args.model, "model name")->capture_default_str();
    chat->add_option("--api-key", chat_args.api_key, "API key (default: $FINCAST_API_KEY)");
    chat->add_option("--stub", chat_args.stub, "scripted replies JSON for offline runs");
    chat->add_option("--temperature", chat_args.temperature, "sampling temperature")
        ->capture_default_str();
    chat->add_option("--out-dir", chat_args.out_dir, "output base directory")
        ->capture_default_str();
    chat->add_option("--tag", chat_args.tag, "run folder name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (inflation->parsed()) {
            infl.order = parse_order(order_text);
            cmd_inflation(infl, std::cout);
        } else if (train->parsed()) {
            cmd_stock_train(train_args, std::cout);
        } else if (predict->parsed()) {
            cmd_stock_predict(predict_args, std::cout);
        } else if (chat->parsed()) {
            cmd_chat(chat_args, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for_current_exception();
    }
    return kExitOk;
}

}  // namespace fincast::cli
