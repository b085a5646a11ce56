"""
White, yellow and green pages
=============================

The registry keeps four record kinds: businesses (who), services (what),
binding templates (where) and tModels (how). A search combines category
references, keywords and required technical specifications.
"""

from socialbroker import (
    BindingTemplate,
    BusinessEntity,
    BusinessService,
    Contact,
    KeyedReference,
    Registry,
    ServiceRequirements,
    TModel,
)

registry = Registry()
SECTOR = "11111111-0000-4000-8000-000000000001"
WSDL = "11111111-0000-4000-8000-000000000002"
registry.register_tmodel(TModel(SECTOR, "construction-sector", "Industry taxonomy"))
registry.register_tmodel(TModel(WSDL, "site-survey-wsdl", overview_url="https://survey.example/wsdl"))

builder = "22222222-0000-4000-8000-000000000001"
surveyor = "22222222-0000-4000-8000-000000000002"
registry.register_business(
    BusinessEntity(
        builder,
        "Poznan Builders",
        contacts=[Contact("Front desk", phone="+48 61 000 00 00")],
        categories=[KeyedReference(SECTOR, "sector", "construction")],
    )
)
registry.register_business(BusinessEntity(surveyor, "Survey Partners"))

registry.publish_service(BusinessService("33333333-0000-4000-8000-000000000001", builder, "Site survey", "Ground and structure survey"))
registry.publish_service(
    BusinessService(
        "33333333-0000-4000-8000-000000000002",
        surveyor,
        "Site survey",
        "Drone-based SURVEY of building sites",
        categories=[KeyedReference(SECTOR, "sector", "construction")],
    )
)
registry.publish_binding(
    BindingTemplate("44444444-0000-4000-8000-000000000001", "33333333-0000-4000-8000-000000000002", "https://survey.example/api", [WSDL])
)

# %%
# Categories match on (taxonomy, value). The builder's service has no
# category of its own but inherits the one on its business record.
construction = KeyedReference(SECTOR, "", "construction")
print([m.service.description for m in registry.find_services(ServiceRequirements(categories=[construction]))])

# %%
# Keywords are case-insensitive substrings of the name or description.
print([m.service.description for m in registry.find_services(ServiceRequirements(keywords=["drone"]))])

# %%
# Requiring a tModel keeps only services with a binding that implements it.
print([m.provider_key for m in registry.find_services(ServiceRequirements(required_tmodels=[WSDL]))])
