#include <exception>
#include <iostream>

#include "minorant/cli.hpp"

int main(int argc, char** argv)
{
    try {
        return minorant::cli::main_entry(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    }
}
