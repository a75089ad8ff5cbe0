#include "fdx/kernels/kernels.hpp"
#include "fdx/kernels/ref_ops.hpp"

namespace fdx::kern {

const KernelTable& scalar_table() {
    static const KernelTable table = {
        "scalar",
        &ref::zgemm,
        &ref::uniform_quantize,
        &ref::conv3x3_fwd<float>,
        &ref::conv3x3_bwd<float>,
        &ref::dense_fwd<float>,
        &ref::dense_bwd<float>,
        &ref::relu_fwd<float>,
        &ref::relu_bwd<float>,
        &ref::adam_step<float>,
        &ref::sumsq,
        &ref::scale_shift,
    };
    return table;
}

} // namespace fdx::kern
