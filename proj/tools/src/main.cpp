#include "app.hpp"

int main(int argc, char** argv) {
    return cvqkd::cli::run(argc, argv);
}
