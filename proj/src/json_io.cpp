#include "hg/json_io.hpp"
