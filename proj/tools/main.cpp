#include "wedgeflow/cli.hpp"

int main(int argc, char** argv) {
    return wedgeflow::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
