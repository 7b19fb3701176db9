#pragma once

// Convenience header pulling in the whole library.

#include "chaoscrypt/error.hpp"
#include "chaoscrypt/matrix.hpp"
#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/hybrid_config.hpp"
#include "chaoscrypt/automata.hpp"
#include "chaoscrypt/framelet.hpp"
#include "chaoscrypt/image.hpp"
#include "chaoscrypt/io_util.hpp"
#include "chaoscrypt/imageio.hpp"
#include "chaoscrypt/permute.hpp"
#include "chaoscrypt/keygen.hpp"
#include "chaoscrypt/cipher.hpp"
#include "chaoscrypt/stego.hpp"
#include "chaoscrypt/metrics.hpp"
#include "chaoscrypt/diagnostics.hpp"
