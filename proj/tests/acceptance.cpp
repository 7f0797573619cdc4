// Acceptance gate: one line per criterion, nonzero exit on any failure.
// The same runner backs the CLI `selftest` subcommand.

#include "gamow/selftest.hpp"

int main()
{
    return gamow::print_acceptance(stdout);
}
