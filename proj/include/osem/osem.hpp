#pragma once

#include "osem/channel.hpp"
#include "osem/config_file.hpp"
#include "osem/csv.hpp"
#include "osem/fft.hpp"
#include "osem/figures.hpp"
#include "osem/harness.hpp"
#include "osem/mitigation.hpp"
#include "osem/ofdm.hpp"
#include "osem/qam.hpp"
#include "osem/rng.hpp"
#include "osem/sem.hpp"
#include "osem/util.hpp"
