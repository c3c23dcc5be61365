#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fincast/crc32.hpp"
#include "fincast/errors.hpp"
#include "fincast/lstm.hpp"

namespace fincast::lstm {

namespace {

constexpr const char* kMagic = "FINCAST-MODEL";
constexpr const char* kVersion = "v1";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ParseError(std::string("model file: bad ") + what + " value '" + token + "'");
    return v;
}

long long parse_ll(const std::string& token, const char* what) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0')
        throw ParseError(std::string("model file: bad ") + what + " value '" + token + "'");
    return v;
}

/// Reads "key value..." and returns the value tokens; enforces the key.
std::vector<std::string> expect_field(std::istringstream& lines, const std::string& key) {
    std::string line;
    if (!std::getline(lines, line))
        throw ParseError("model file: missing field '" + key + "'");
    std::istringstream tok(line);
    std::string head;
    tok >> head;
    if (head != key) throw ParseError("model file: expected field '" + key + "', got '" + head + "'");
    std::vector<std::string> values;
    std::string v;
    while (tok >> v) values.push_back(v);
    if (values.empty()) throw ParseError("model file: field '" + key + "' has no value");
    return values;
}

LstmNetwork make_shape(int input_dim, int h1, int h2, int lookback) {
    // Reuse init to allocate, then zero everything; parameters come from the file.
    LstmNetwork net = init_network(0, input_dim, h1, 0.0, lookback);
    if (h2 != h1) throw ParseError("model file: mismatched hidden sizes are not supported");
    std::vector<double> zeros(static_cast<std::size_t>(net.param_count()), 0.0);
    unflatten_params(net, zeros);
    return net;
}

}  // namespace

void save_model(const LstmNetwork& net, const preprocess::ScalerParams& scaler,
                const std::string& path) {
    std::ostringstream body;
    body << kMagic << " " << kVersion << "\n";
    body << "shape " << net.layer1.input_dim << " " << net.layer1.hidden_dim << " "
         << net.layer2.hidden_dim << "\n";
    body << "lookback " << net.lookback << "\n";
    body << "dropout_rate " << fmt17(net.dropout_rate) << "\n";
    body << "scaler " << fmt17(scaler.min) << " " << fmt17(scaler.max) << "\n";
    body << "seed " << net.seed << "\n";
    const auto flat = flatten_params(net);
    body << "params " << flat.size() << "\n";
    for (double v : flat) body << fmt17(v) << "\n";

    const std::string text = body.str();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file for writing: " + path);
    out << text << "crc32 " << crc32_hex(text) << "\n";
    out.flush();
    if (!out) throw IoError("failed writing model file: " + path);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    // The final line must be the checksum of everything before it.
    const auto crc_pos = text.rfind("crc32 ");
    if (crc_pos == std::string::npos || (crc_pos != 0 && text[crc_pos - 1] != '\n'))
        throw ChecksumError("model file: checksum line missing (truncated file?)");
    const std::string body = text.substr(0, crc_pos);
    std::string crc_line = text.substr(crc_pos);
    while (!crc_line.empty() && (crc_line.back() == '\n' || crc_line.back() == '\r'))
        crc_line.pop_back();
    const std::string stored = crc_line.substr(6);
    if (stored != crc32_hex(body))
        throw ChecksumError("model file: checksum mismatch (corrupt or truncated file)");

    std::istringstream lines(body);
    std::string header;
    if (!std::getline(lines, header)) throw ChecksumError("model file: empty body");
    {
        std::istringstream tok(header);
        std::string magic, version;
        tok >> magic >> version;
        if (magic != kMagic) throw FormatVersionError("not a model file: bad magic '" + magic + "'");
        if (version != kVersion)
            throw FormatVersionError("unsupported model file version '" + version + "'");
    }

    const auto shape = expect_field(lines, "shape");
    if (shape.size() != 3) throw ParseError("model file: shape needs 3 values");
    const int input_dim = static_cast<int>(parse_ll(shape[0], "shape"));
    const int h1 = static_cast<int>(parse_ll(shape[1], "shape"));
    const int h2 = static_cast<int>(parse_ll(shape[2], "shape"));
    const int lookback = static_cast<int>(parse_ll(expect_field(lines, "lookback")[0], "lookback"));

    LstmNetwork net = make_shape(input_dim, h1, h2, lookback);
    net.dropout_rate = parse_double(expect_field(lines, "dropout_rate")[0], "dropout_rate");

    const auto scaler_tokens = expect_field(lines, "scaler");
    if (scaler_tokens.size() != 2) throw ParseError("model file: scaler needs min and max");
    preprocess::ScalerParams scaler{parse_double(scaler_tokens[0], "scaler min"),
                                    parse_double(scaler_tokens[1], "scaler max")};
    if (!(scaler.max > scaler.min)) throw ParseError("model file: scaler max must exceed min");

    net.seed = static_cast<std::uint64_t>(parse_ll(expect_field(lines, "seed")[0], "seed"));

    const auto count = static_cast<std::size_t>(parse_ll(expect_field(lines, "params")[0], "params"));
    if (count != static_cast<std::size_t>(net.param_count()))
        throw ParseError("model file: parameter count does not match shape");
    std::vector<double> flat;
    flat.reserve(count);
    std::string line;
    while (flat.size() < count && std::getline(lines, line))
        flat.push_back(parse_double(line, "parameter"));
    if (flat.size() != count) throw ParseError("model file: parameter block shorter than declared");
    unflatten_params(net, flat);

    return LoadedModel{std::move(net), scaler};
}

}  // namespace fincast::lstm
