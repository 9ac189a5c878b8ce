#include "oracles.h"
