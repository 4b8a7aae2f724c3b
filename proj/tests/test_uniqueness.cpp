#include <doctest.h>

TEST_SUITE_BEGIN("uniqueness");
TEST_SUITE_END();
