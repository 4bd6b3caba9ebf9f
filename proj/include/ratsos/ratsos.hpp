#pragma once

#include "ratsos/certificate.hpp"
#include "ratsos/certificate_io.hpp"
#include "ratsos/certify.hpp"
#include "ratsos/gram.hpp"
#include "ratsos/multipoly.hpp"
#include "ratsos/parse.hpp"
#include "ratsos/positivity.hpp"
#include "ratsos/projectlift.hpp"
#include "ratsos/rational.hpp"
#include "ratsos/support.hpp"
#include "ratsos/triangular.hpp"
#include "ratsos/unipoly.hpp"
