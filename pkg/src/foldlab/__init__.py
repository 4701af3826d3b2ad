# foldlab - exact computations around Dynkin folding
