#pragma once
#include "hg/padic.hpp"
