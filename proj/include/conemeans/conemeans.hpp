#pragma once

#include "conemeans/cone_geometry.hpp"
#include "conemeans/errors.hpp"
#include "conemeans/means.hpp"
#include "conemeans/preserver_lab.hpp"
#include "conemeans/psd_core.hpp"
#include "conemeans/sampling.hpp"
#include "conemeans/suites.hpp"
#include "conemeans/tolerance.hpp"
#include "conemeans/version.hpp"
