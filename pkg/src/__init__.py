# foldlab - source package
