#ifndef RFSCOPE_TESTS_TEST_UTIL_HPP
#define RFSCOPE_TESTS_TEST_UTIL_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::string read_data_file(const std::string& name) {
    const std::string path = std::string(RFSCOPE_TEST_DATA_DIR) + "/" + name;
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("test fixture missing: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

} // namespace testutil

#endif
