# Common shared modules
