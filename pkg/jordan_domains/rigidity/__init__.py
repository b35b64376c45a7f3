from ._kernel import kernelSpec, kernelSpecFromSystem, kernelLog, tripleFromKernel, compareKernelTensor
from ._schwarz import schwarzBalancedCheck, keyLemmaScenario
from ._rescaling import *
