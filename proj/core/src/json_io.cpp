// Copyright 2026 The qtri Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtri/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "qtri/error.hpp"

namespace qtri {
namespace {

void dump_into(const nlohmann::json &value, std::string &out) {
    using value_t = nlohmann::json::value_t;
    switch (value.type()) {
        case value_t::object: {
            out += '{';
            bool first = true;
            // nlohmann::json objects are std::map-backed, so iteration is key-sorted.
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump_into(it.value(), out);
            }
            out += '}';
            return;
        }
        case value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i) out += ',';
                dump_into(value[i], out);
            }
            out += ']';
            return;
        }
        case value_t::number_float:
            out += format_double(value.get<double>());
            return;
        default:
            out += value.dump();
            return;
    }
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Input, "cannot format a non-finite number");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string canonical_dump(const nlohmann::json &value) {
    std::string out;
    dump_into(value, out);
    return out;
}

void write_file_atomically(const std::string &path, const std::string &contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        os.flush();
        if (!os) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        const std::string reason = ec.message();
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename into " + path + ": " + reason);
    }
}

}  // namespace qtri
