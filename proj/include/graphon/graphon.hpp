#pragma once

#include "graphon/error.hpp"
#include "graphon/homomorphism.hpp"
#include "graphon/io.hpp"
#include "graphon/kernel.hpp"
#include "graphon/norms.hpp"
#include "graphon/spectral.hpp"
#include "graphon/verify.hpp"
