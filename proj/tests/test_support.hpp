#pragma once

#include "talakat/script.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace talakat::testing {

inline std::string read_data(const std::string& relative)
{
    const std::string path = std::string(TALAKAT_TEST_DATA) + "/" + relative;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("missing test file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline Script crossfire_script() { return parse_script(read_data("data/crossfire.talakat")); }

}  // namespace talakat::testing
